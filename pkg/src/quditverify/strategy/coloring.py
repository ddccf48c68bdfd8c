"""Vertex coloring into independent sets.

Small graphs (at most ``EXACT_LIMIT`` vertices) are colored optimally by
backtracking over a DSATUR vertex order; larger ones fall back to plain
DSATUR, whose color count is only an upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..states import GraphSpec

EXACT_LIMIT = 20


@dataclass(frozen=True)
class ColoringResult:
    sets: tuple[tuple[int, ...], ...]
    exact: bool

    @property
    def chromatic_number(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def color_of(self, vertex: int) -> int:
        for i, members in enumerate(self.sets):
            if vertex in members:
                return i
        raise KeyError(vertex)


def _dsatur(neighbours: list[set[int]]) -> list[int]:
    n = len(neighbours)
    colors = [-1] * n
    for _ in range(n):
        best, best_key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            saturation = len({colors[u] for u in neighbours[v] if colors[u] >= 0})
            key = (saturation, len(neighbours[v]), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        used = {colors[u] for u in neighbours[best]}
        colors[best] = next(c for c in range(n) if c not in used)
    return colors


def _try_colors(neighbours: list[set[int]], order: list[int], k: int) -> list[int] | None:
    colors = [-1] * len(neighbours)

    def place(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        taken = {colors[u] for u in neighbours[v]}
        # a fresh color is interchangeable with any other fresh one, try only the first
        for c in range(min(k, used + 1)):
            if c in taken:
                continue
            colors[v] = c
            if place(pos + 1, max(used, c + 1)):
                return True
        colors[v] = -1
        return False

    return colors if place(0, 0) else None


def _group(colors: list[int]) -> tuple[tuple[int, ...], ...]:
    # label colors by first appearance so that results are canonical
    relabel: dict[int, int] = {}
    for c in colors:
        relabel.setdefault(c, len(relabel))
    sets: list[list[int]] = [[] for _ in relabel]
    for v, c in enumerate(colors):
        sets[relabel[c]].append(v)
    return tuple(tuple(s) for s in sets)


def color_graph(graph: GraphSpec) -> ColoringResult:
    """Partition the vertices into independent sets, exactly for small graphs."""
    neighbours = graph.adjacency()
    greedy = _dsatur(neighbours)
    if graph.n > EXACT_LIMIT:
        return ColoringResult(_group(greedy), exact=False)
    order = sorted(range(graph.n), key=lambda v: greedy[v])
    best = greedy
    for k in range(1, max(greedy) + 1):
        found = _try_colors(neighbours, order, k)
        if found is not None:
            best = found
            break
    return ColoringResult(_group(best), exact=True)


def is_independent_cover(graph: GraphSpec, coloring: ColoringResult) -> bool:
    covered = sorted(v for s in coloring.sets for v in s)
    if covered != list(range(graph.n)):
        return False
    neighbours = graph.adjacency()
    return all(not (neighbours[v] & set(members)) for members in coloring.sets for v in members)
