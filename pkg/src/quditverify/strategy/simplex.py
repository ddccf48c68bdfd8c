"""Dense tableau simplex with Bland's anti-cycling rule.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` for ``b >= 0``, which starts
feasible from the slack basis, and reports the dual prices too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InternalError, InvalidArgumentError

PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    dual: np.ndarray
    value: float
    pivots: int


class UnboundedError(InternalError):
    pass


def maximize(c: np.ndarray, a: np.ndarray, b: np.ndarray, max_pivots: int = 100_000) -> SimplexResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    if b.shape != (m,) or c.shape != (n,):
        raise InvalidArgumentError("inconsistent LP shapes")
    if np.any(b < 0):
        raise InvalidArgumentError("the slack start needs b >= 0")

    # rows 0..m-1 are constraints, row m is the objective written as z - c.x = 0
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[m, :n] = -c
    basis = list(range(n, n + m))

    for pivots in range(max_pivots):
        reduced = tableau[m, :-1]
        candidates = np.flatnonzero(reduced < -PIVOT_TOL)
        if candidates.size == 0:
            break
        col = int(candidates[0])
        column = tableau[:m, col]
        positive = np.flatnonzero(column > PIVOT_TOL)
        if positive.size == 0:
            raise UnboundedError("LP is unbounded")
        ratios = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = positive[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        tableau[row] /= tableau[row, col]
        factors = tableau[:, col].copy()
        factors[row] = 0.0
        tableau -= np.outer(factors, tableau[row])
        basis[row] = col
    else:
        raise InternalError(f"simplex did not converge in {max_pivots} pivots")

    x = np.zeros(n + m)
    x[basis] = tableau[:m, -1]
    return SimplexResult(x[:n], tableau[m, n : n + m].copy(), float(tableau[m, -1]), pivots)
