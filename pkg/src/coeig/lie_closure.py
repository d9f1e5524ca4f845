"""Basis generation for the matrix Lie algebra spanned by a set of generators.

The closure loop repeatedly brackets basis elements and keeps the results
that are linearly independent, using an incremental Gaussian-elimination
tracker whose per-vector cost is O(r^2) for vectors of length r = n^2.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np

from .exceptions import DependentGeneratorsError, InputError
from .linalg import DEFAULT_TOL, Tolerances, as_square_family

__all__ = [
    "IndependenceTracker",
    "ClosureStrategy",
    "ClosureStats",
    "LieBasis",
    "independent_indices",
    "remove_linearly_dependent",
    "generate_lie_algebra",
    "iteration_count",
    "closure_residual_max",
    "span_residual",
]


class IndependenceTracker:
    """Incremental linear-independence filter for vectors in C^r.

    Maintains an invertible row-operation matrix ``row_ops`` such that every
    kept vector ``u_t`` satisfies ``row_ops @ u_t = e_{p_t}`` for a distinct
    pivot row ``p_t``. A candidate ``v`` is transformed to ``w = row_ops @ v``;
    the mass of ``w`` away from the pivot rows decides dependence. Accepted
    vectors extend the elimination with a new pivot chosen by partial
    pivoting; rejected vectors restore the pre-call snapshot, so a rejection
    leaves the tracker bit-for-bit unchanged.
    """

    def __init__(self, vector_dim: int, tol: Tolerances = DEFAULT_TOL):
        if vector_dim < 1:
            raise InputError(f"vector_dim must be >= 1, got {vector_dim}")
        self.vector_dim = int(vector_dim)
        self.row_ops = np.eye(self.vector_dim, dtype=complex)
        self.pivots: list[int] = []
        self._tol = tol

    @property
    def kept(self) -> int:
        return len(self.pivots)

    def try_add(self, v) -> bool:
        """Keep ``v`` if it is independent of the kept set; report the decision."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.vector_dim:
            raise InputError(
                f"vector length {v.shape[0]} does not match tracker dimension {self.vector_dim}"
            )
        saved = (self.row_ops.copy(), list(self.pivots))
        w = self.row_ops @ v
        free = np.ones(self.vector_dim, dtype=bool)
        free[self.pivots] = False
        residual = np.linalg.norm(w[free])
        threshold = self._tol.rank_rel * self.vector_dim * np.linalg.norm(v)
        if residual <= threshold:
            self.row_ops, self.pivots = saved
            return False
        free_idx = np.flatnonzero(free)
        q = int(free_idx[np.argmax(np.abs(w[free_idx]))])
        pivot = w[q]
        coeff = w / pivot
        coeff[q] = 0.0
        self.row_ops -= np.outer(coeff, self.row_ops[q])
        self.row_ops[q] /= pivot
        self.pivots.append(q)
        return True


class ClosureStrategy(enum.Enum):
    """Pair-selection rule for the closure loop."""

    ALL_PAIRS = "all-pairs"
    NEW_AGAINST_GENERATORS = "new-vs-generators"


@dataclass(frozen=True)
class ClosureStats:
    """Instrumentation counters from one closure run."""

    commutators_computed: int
    elements_accepted: int


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Ordered basis of the generated Lie algebra.

    Elements carry unit Frobenius norm. ``provenance[i]`` is either
    ``("generator", input_index)`` or ``("bracket", left, right)`` with
    ``left``/``right`` indexing into ``elements``.
    """

    ambient_dim: int
    elements: list[np.ndarray]
    provenance: list[tuple]
    stats: ClosureStats

    @property
    def dim(self) -> int:
        return len(self.elements)


def _unit_vec(m: np.ndarray) -> np.ndarray:
    v = m.reshape(-1)
    norm = np.linalg.norm(v)
    return v / norm if norm > 0.0 else v


def independent_indices(ms, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """Indices of a maximal independent subsequence, first occurrence wins."""
    if not len(ms):
        return []
    mats = as_square_family(ms)
    tracker = IndependenceTracker(mats[0].shape[0] ** 2, tol)
    return [i for i, m in enumerate(mats) if tracker.try_add(_unit_vec(m))]


def remove_linearly_dependent(ms, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Drop matrices that are linear combinations of earlier ones."""
    if not len(ms):
        return []
    mats = as_square_family(ms)
    return [mats[i] for i in independent_indices(mats, tol)]


def _bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _try_accept(c, elements, provenance, tracker, parents) -> bool:
    norm = np.linalg.norm(c)
    candidate = c / norm if norm > 0.0 else c
    if not tracker.try_add(candidate.reshape(-1)):
        return False
    elements.append(candidate)
    provenance.append(("bracket",) + parents)
    return True


def _close_all_pairs(elements, provenance, tracker, cap):
    done: set[tuple[int, int]] = set()
    computed = accepted = 0
    while len(elements) < cap:
        progressed = False
        m = len(elements)
        for i in range(m):
            for j in range(i + 1, m):
                if (i, j) in done:
                    continue
                done.add((i, j))
                computed += 1
                progressed = True
                if _try_accept(_bracket(elements[i], elements[j]), elements,
                               provenance, tracker, (i, j)):
                    accepted += 1
        if not progressed:
            break
    return computed, accepted


def _close_new_vs_generators(elements, provenance, tracker, cap, k):
    queue = deque(range(len(elements)))
    computed = accepted = 0
    while queue and len(elements) < cap:
        e = queue.popleft()
        for g in range(k):
            # generator-generator pairs are covered once via anti-symmetry
            if e < k and g <= e:
                continue
            computed += 1
            if _try_accept(_bracket(elements[e], elements[g]), elements,
                           provenance, tracker, (e, g)):
                accepted += 1
                queue.append(len(elements) - 1)
            if len(elements) >= cap:
                break
    return computed, accepted


def generate_lie_algebra(
    generators,
    tol: Tolerances = DEFAULT_TOL,
    strategy: ClosureStrategy = ClosureStrategy.NEW_AGAINST_GENERATORS,
) -> LieBasis:
    """Basis of the Lie algebra generated by linearly independent matrices.

    Parameters
    ----------
    generators : sequence of square complex matrices, all of one size n,
        linearly independent (run ``remove_linearly_dependent`` first
        otherwise; dependent input raises ``DependentGeneratorsError``).
    strategy : ``ClosureStrategy``
        ALL_PAIRS brackets every unordered pair of current elements once,
        re-scanning until a full pass adds nothing (at most d(d-1)/2
        brackets). NEW_AGAINST_GENERATORS brackets each accepted element
        against the original generators only (at most d*k brackets).

    Returns
    -------
    LieBasis with unit-Frobenius-norm elements whose span contains the
    generators and is closed under the commutator. The dimension is capped
    by n^2; once the full matrix algebra is reached, bracketing stops.
    """
    mats = as_square_family(generators, name="generators")
    n = mats[0].shape[0]
    k = len(mats)
    tracker = IndependenceTracker(n * n, tol)
    dependent = [i for i, m in enumerate(mats) if not tracker.try_add(_unit_vec(m))]
    if dependent:
        raise DependentGeneratorsError(
            f"generators at indices {dependent} are linearly dependent on earlier ones",
            dependent_indices=dependent,
        )
    elements = [m / np.linalg.norm(m) for m in mats]
    provenance: list[tuple] = [("generator", i) for i in range(k)]
    cap = n * n
    if strategy is ClosureStrategy.ALL_PAIRS:
        computed, accepted = _close_all_pairs(elements, provenance, tracker, cap)
    elif strategy is ClosureStrategy.NEW_AGAINST_GENERATORS:
        computed, accepted = _close_new_vs_generators(elements, provenance, tracker, cap, k)
    else:
        raise InputError(f"unknown closure strategy {strategy!r}")
    return LieBasis(n, elements, provenance, ClosureStats(computed, accepted))


def iteration_count(basis: LieBasis) -> ClosureStats:
    """Instrumentation counters recorded during ``generate_lie_algebra``."""
    return basis.stats


def _span_projector_q(ms) -> np.ndarray:
    cols = np.column_stack([m.reshape(-1) for m in ms])
    q, _ = np.linalg.qr(cols)
    return q


def span_residual(ms, span_ms) -> float:
    """Largest relative distance of any matrix in ``ms`` from span(span_ms)."""
    q = _span_projector_q(span_ms)
    worst = 0.0
    for m in ms:
        v = m.reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            continue
        worst = max(worst, np.linalg.norm(v - q @ (q.conj().T @ v)) / norm)
    return float(worst)


def closure_residual_max(basis: LieBasis) -> float:
    """Worst relative distance of any pairwise bracket from the basis span."""
    q = _span_projector_q(basis.elements)
    worst = 0.0
    for i in range(basis.dim):
        for j in range(i + 1, basis.dim):
            c = _bracket(basis.elements[i], basis.elements[j]).reshape(-1)
            norm = np.linalg.norm(c)
            if norm == 0.0:
                continue
            worst = max(worst, np.linalg.norm(c - q @ (q.conj().T @ c)) / norm)
    return float(worst)
