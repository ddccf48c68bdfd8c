"""Monte Carlo simulation of the pass/fail verification protocol.

Each round draws a test subset ``i`` with probability ``mu_i``, one of its
exponent tuples ``h`` uniformly, and an outcome ``j`` of the measurement in
the basis ``U|j>`` by the Born rule.  The round passes when ``j`` satisfies
the residue condition for ``h``, so the pass probability per round is
``tr(Omega sigma)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .kernels import residue_table
from .qlinalg import dagger, hermitian_spectrum, max_abs
from .stabilizer import SUPPORT_TOL, AdaptivePlan, _conditional_branches, _reordered
from .strategy.partitions import TestPartition
from .strategy.spectral import VerificationOperator

TRACE_TOL = 1e-10


class SourceKind(str, enum.Enum):
    HONEST = "honest"
    WORST_CASE = "worst"
    DEPOLARIZED = "depolarized"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SourceModel:
    kind: SourceKind
    density: np.ndarray
    epsilon: float = 0.0

    def __post_init__(self):
        rho = np.asarray(self.density, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidArgumentError("density must be a square matrix")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise InvalidArgumentError(f"density trace is {np.trace(rho).real}, expected 1")
        values = hermitian_spectrum(rho)[0]
        if values[-1] < -TRACE_TOL:
            raise InvalidArgumentError(f"density has negative eigenvalue {values[-1]:.3g}")
        object.__setattr__(self, "density", rho)

    def components(self) -> tuple[np.ndarray, np.ndarray]:
        """Mixture weights and pure components from one eigendecomposition."""
        values, vectors = hermitian_spectrum(self.density)
        keep = values > TRACE_TOL
        weights = values[keep] / values[keep].sum()
        return weights, vectors[:, keep]

    def fidelity(self, psi: np.ndarray) -> float:
        return float(np.real(np.conj(psi) @ self.density @ psi))


def honest_source(psi: np.ndarray) -> SourceModel:
    return SourceModel(SourceKind.HONEST, np.outer(psi, np.conj(psi)))


def worst_case_state(operator: VerificationOperator, psi: np.ndarray, epsilon: float) -> SourceModel:
    """``(1 - eps)|psi><psi| + eps|b><b|`` with ``|b>`` a second-eigenvalue eigenvector of Omega orthogonal to psi."""
    if not 0 < epsilon < 1:
        raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {epsilon}")
    values, vectors = hermitian_spectrum(operator.omega)
    second = np.flatnonzero(np.abs(values - operator.beta) <= 1e-9)
    if second.size == 0:
        raise InvalidArgumentError("no eigenvector found for the second eigenvalue")
    candidates = vectors[:, second]
    candidates = candidates - np.outer(psi, np.conj(psi) @ candidates)
    norms = np.linalg.norm(candidates, axis=0)
    b = candidates[:, int(np.argmax(norms))] / norms.max()
    rho = (1 - epsilon) * np.outer(psi, np.conj(psi)) + epsilon * np.outer(b, np.conj(b))
    return SourceModel(SourceKind.WORST_CASE, rho, epsilon)


def depolarized_source(psi: np.ndarray, epsilon: float) -> SourceModel:
    """``(1 - e)|psi><psi| + e I / D`` with ``e`` chosen so that the fidelity is ``1 - epsilon``."""
    size = psi.shape[0]
    mixing = epsilon * size / (size - 1)
    if not 0 <= mixing <= 1:
        raise InvalidArgumentError(f"infidelity {epsilon} is out of reach for dimension {size}")
    rho = (1 - mixing) * np.outer(psi, np.conj(psi)) + mixing * np.eye(size) / size
    return SourceModel(SourceKind.DEPOLARIZED, rho, epsilon)


def custom_source(density: np.ndarray) -> SourceModel:
    return SourceModel(SourceKind.CUSTOM, density)


@dataclass(frozen=True)
class ProtocolReport:
    seed: int
    trials: int
    copies: int
    passes_per_trial: np.ndarray
    expected_pass_probability: float
    source: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return self.trials * self.copies

    @property
    def pass_frequency(self) -> float:
        return float(self.passes_per_trial.sum()) / self.rounds

    @property
    def pass_sigma(self) -> float:
        """Binomial standard error of the per-test frequency at the expected probability."""
        p = self.expected_pass_probability
        return math.sqrt(max(p * (1 - p), 0.0) / self.rounds)

    @property
    def acceptance_rate(self) -> float:
        return float(np.mean(self.passes_per_trial == self.copies))

    def acceptance_interval(self, z: float = 1.96) -> tuple[float, float]:
        """Wilson score interval for the all-pass probability."""
        n, p = self.trials, self.acceptance_rate
        centre = (p + z * z / (2 * n)) / (1 + z * z / n)
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
        return max(0.0, centre - half), min(1.0, centre + half)

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.passes_per_trial, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def to_json(self) -> dict[str, Any]:
        low, high = self.acceptance_interval()
        return {
            "seed": self.seed,
            "source": self.source,
            "trials": self.trials,
            "copies": self.copies,
            "rounds": self.rounds,
            "pass_frequency": self.pass_frequency,
            "pass_sigma": self.pass_sigma,
            "expected_pass_probability": self.expected_pass_probability,
            "acceptance_rate": self.acceptance_rate,
            "acceptance_interval": [low, high],
            "expected_acceptance": self.expected_pass_probability**self.copies,
            "passes_histogram": {str(k): v for k, v in self.histogram().items()},
            **self.extra,
        }


def trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    """One independent PCG64 stream per trial, all derived from ``seed``."""
    return [np.random.Generator(np.random.PCG64(child)) for child in np.random.SeedSequence(seed).spawn(trials)]


def outcome_distribution(unitary: np.ndarray, source: SourceModel) -> np.ndarray:
    """Probability of each outcome ``j`` when measuring in the basis ``U|j>``."""
    weights, components = source.components()
    amplitudes = dagger(unitary) @ components
    probs = (np.abs(amplitudes) ** 2) @ weights
    return probs / probs.sum()


def run_protocol(
    unitary: np.ndarray,
    partition: TestPartition,
    source: SourceModel,
    copies: int,
    trials: int = 1,
    seed: int = 0,
    weights: Sequence[float] | None = None,
) -> ProtocolReport:
    """Simulate ``trials`` runs of ``copies`` rounds each."""
    if copies < 1 or trials < 1:
        raise InvalidArgumentError("copies and trials must be at least 1")
    weights = np.asarray([float(w) for w in (partition.weights if weights is None else weights)])
    if weights.shape != (partition.tau,) or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise InvalidArgumentError("weights must be a probability vector over the subsets")
    tuples = [h for subset in partition.subsets for h in subset.tuples]
    pair_probs = np.concatenate([np.full(len(s), w / len(s)) for s, w in zip(partition.subsets, weights)])
    pass_table = residue_table(tuples, partition.dims)
    outcome_probs = outcome_distribution(unitary, source)
    expected = float(pair_probs @ (pass_table @ outcome_probs))

    pair_cdf = np.cumsum(pair_probs)
    pair_cdf[-1] = 1.0
    outcome_cdf = np.cumsum(outcome_probs)
    outcome_cdf[-1] = 1.0
    passes = np.empty(trials, dtype=np.int64)
    for t, rng in enumerate(trial_generators(seed, trials)):
        pairs = np.searchsorted(pair_cdf, rng.random(copies), side="right")
        outcomes = np.searchsorted(outcome_cdf, rng.random(copies), side="right")
        passes[t] = int(pass_table[pairs, outcomes].sum())
    return ProtocolReport(seed, trials, copies, passes, expected, source.kind.value)


class SequentialSampler:
    """Draws outcome paths of an adaptive plan one particle at a time.

    Conditional branch probabilities are cached per (component, prefix), so
    repeated sampling costs a dictionary lookup per step.
    """

    def __init__(self, plan: AdaptivePlan, source: SourceModel):
        self.plan = plan
        self.weights, components = source.components()
        self.roots = [_reordered(plan, components[:, c]) for c in range(components.shape[1])]
        self._cache: dict[tuple[int, tuple[int, ...]], tuple[np.ndarray, np.ndarray]] = {}

    def _branches(self, component: int, prefix: tuple[int, ...], state: np.ndarray):
        key = (component, prefix)
        if key not in self._cache:
            branches = _conditional_branches(self.plan, state, prefix)
            norms = np.array([np.linalg.norm(b) ** 2 for b in branches])
            self._cache[key] = (branches, np.cumsum(norms) / norms.sum())
        return self._cache[key]

    def sample(self, rng: np.random.Generator) -> tuple[int, ...]:
        component = int(np.searchsorted(np.cumsum(self.weights), rng.random(), side="right"))
        component = min(component, len(self.roots) - 1)
        state = self.roots[component]
        prefix: tuple[int, ...] = ()
        for _ in range(self.plan.dims.n):
            branches, cdf = self._branches(component, prefix, state)
            j = min(int(np.searchsorted(cdf, rng.random(), side="right")), len(cdf) - 1)
            state = branches[j]
            prefix += (j,)
        return prefix


def sequential_measure(
    plan: AdaptivePlan, source: SourceModel, seed: int | np.random.Generator = 0, shots: int | None = None
) -> tuple[int, ...] | list[tuple[int, ...]]:
    """One path (``shots is None``) or a list of ``shots`` paths sampled step by step."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sampler = SequentialSampler(plan, source)
    if shots is None:
        return sampler.sample(rng)
    return [sampler.sample(rng) for _ in range(shots)]


def total_variation(empirical: dict, exact: dict) -> float:
    keys = set(empirical) | set(exact)
    return 0.5 * sum(abs(empirical.get(k, 0.0) - exact.get(k, 0.0)) for k in keys)


def trace_pass_probability(operator: VerificationOperator, source: SourceModel) -> float:
    return float(np.real(np.trace(operator.omega @ source.density)))


def check_source(source: SourceModel, psi: np.ndarray, epsilon: float) -> float:
    """Deviation of the source fidelity from ``1 - epsilon``."""
    return abs(source.fidelity(psi) - (1 - epsilon))


__all__ = [
    "SUPPORT_TOL",
    "ProtocolReport",
    "SequentialSampler",
    "SourceKind",
    "SourceModel",
    "custom_source",
    "depolarized_source",
    "honest_source",
    "max_abs",
    "run_protocol",
    "sequential_measure",
    "total_variation",
    "trace_pass_probability",
    "worst_case_state",
]
