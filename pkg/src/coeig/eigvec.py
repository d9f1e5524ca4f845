"""Common-eigenvector computation for families of complex matrices.

The commuting case runs a nested smallest-eigenspace iteration. The general
case builds the Lie closure of the family, intersects the kernels of all
pairwise commutators into a subspace T, and reduces to the commuting case
on T; an empty T certifies that no common eigenvector exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, NumericalFailureError
from .lie_closure import (
    ClosureStrategy,
    LieBasis,
    generate_lie_algebra,
    independent_indices,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_square_family,
    restrict,
    scalar_multiple_of_identity,
    schur_eigenspaces,
)

__all__ = [
    "EigvecResult",
    "SearchReport",
    "verified_result",
    "pairwise_commuting",
    "common_eigenvector_commuting",
    "shemesh_subspace",
    "common_eigenvector",
    "common_eigenvector_report",
]


@dataclass(frozen=True, eq=False)
class EigvecResult:
    """A verified common eigenvector.

    ``eigenvalues[i]`` and ``residuals[i]`` refer to the i-th input matrix;
    residuals are ``||A v - lam v|| / max(||A||_F, 1)``.
    """

    vector: np.ndarray
    eigenvalues: np.ndarray
    residuals: np.ndarray

    def __post_init__(self):
        if abs(np.linalg.norm(self.vector) - 1.0) > 1e-12:
            raise InputError("eigenvector must have unit norm")


def verified_result(ms, v, tol: Tolerances = DEFAULT_TOL) -> EigvecResult:
    """Build an ``EigvecResult`` for ``v`` against ``ms``, or fail loudly.

    Eigenvalues are Rayleigh quotients of the normalized vector; any
    residual above ``residual_rel`` raises ``NumericalFailureError``
    instead of returning an unverified answer.
    """
    mats = as_square_family(ms)
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise InputError("candidate eigenvector is zero")
    v = v / norm
    eigenvalues = np.array([v.conj() @ (a @ v) for a in mats])
    residuals = np.array(
        [
            np.linalg.norm(a @ v - lam * v) / max(np.linalg.norm(a), 1.0)
            for a, lam in zip(mats, eigenvalues)
        ]
    )
    if np.any(residuals > tol.residual_rel):
        raise NumericalFailureError(
            "candidate vector failed eigen-residual verification",
            diagnostics={
                "residuals": [float(r) for r in residuals],
                "bound": tol.residual_rel,
            },
        )
    return EigvecResult(v, eigenvalues, residuals)


def pairwise_commuting(ms, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True if every pairwise commutator is numerically zero.

    The test is ``||[A_i, A_j]||_F <= residual_rel * ||A_i||_F * ||A_j||_F``.
    """
    mats = as_square_family(ms)
    norms = [np.linalg.norm(a) for a in mats]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            defect = np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i])
            if defect > tol.residual_rel * norms[i] * norms[j]:
                return False
    return True


def common_eigenvector_commuting(ms, tol: Tolerances = DEFAULT_TOL) -> EigvecResult:
    """Common eigenvector of a pairwise commuting family.

    Iterates the nested-subspace construction: starting from the full
    space, each matrix is restricted to the current subspace and, unless
    the restriction is a scalar multiple of the identity, the subspace is
    replaced by the lift of the restriction's smallest eigenspace. Over C
    this always terminates with a non-trivial subspace, any unit vector of
    which is a common eigenvector.

    Raises ``InputError`` for non-commuting input and
    ``NumericalFailureError`` if the final residual verification fails.
    """
    mats = as_square_family(ms)
    if not pairwise_commuting(mats, tol):
        raise InputError("matrices do not commute within tolerance")
    n = mats[0].shape[0]
    space = Subspace.full(n)
    for a in mats:
        if space.dim == 1:
            break
        restricted = restrict(a, space, tol)
        if scalar_multiple_of_identity(restricted, tol) is not None:
            continue
        smallest = schur_eigenspaces(restricted, tol)[0]
        space = Subspace.from_columns(space.basis @ smallest.space.basis)
    return verified_result(mats, space.basis[:, 0], tol)


def _shemesh_with_cutoff(mats, tol: Tolerances) -> tuple[Subspace, float]:
    """Shemesh-style subspace plus the rank cutoff used for the stacked kernel."""
    n = mats[0].shape[0]
    norms = [np.linalg.norm(a) for a in mats]
    blocks = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = mats[i] @ mats[j] - mats[j] @ mats[i]
            if np.linalg.norm(c) > tol.residual_rel * norms[i] * norms[j]:
                blocks.append(c)
    if not blocks:
        return Subspace.full(n), 0.0
    stack = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stack, full_matrices=True)
    cutoff = tol.rank_rel * max(stack.shape) * s[0]
    rank = int(np.count_nonzero(s > cutoff))
    return Subspace(n, vh[rank:].conj().T), float(cutoff)


def shemesh_subspace(ms, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Intersection of the kernels of all pairwise commutators of ``ms``.

    Commutators that are numerically zero relative to their factors impose
    no constraint; in particular a commuting family yields the full space.
    Every common eigenvector of ``ms`` lies in this subspace.
    """
    mats = as_square_family(ms)
    space, _ = _shemesh_with_cutoff(mats, tol)
    return space


@dataclass(frozen=True, eq=False)
class SearchReport:
    """Outcome of one common-eigenvector search, with instrumentation.

    ``closure`` and ``shemesh_dim`` are ``None`` when the commuting fast
    path answered without building the Lie closure.
    """

    result: EigvecResult | None
    fast_path: bool
    closure: LieBasis | None
    shemesh_dim: int | None


def _assert_restrictions_commute(elements, space, tol: Tolerances, kernel_cutoff: float):
    """Restrictions of closure elements to T must commute; 100x rank_rel slack."""
    restrictions = [restrict(e, space, tol) for e in elements]
    norms = [np.linalg.norm(r) for r in restrictions]
    for i in range(len(restrictions)):
        for j in range(i + 1, len(restrictions)):
            defect = np.linalg.norm(
                restrictions[i] @ restrictions[j] - restrictions[j] @ restrictions[i]
            )
            bound = 100.0 * tol.rank_rel * max(1.0, norms[i] * norms[j])
            if defect > bound:
                raise NumericalFailureError(
                    "restrictions to the commutator-kernel subspace do not commute;"
                    " tolerances are likely inconsistent for this instance",
                    diagnostics={
                        "pair": (i, j),
                        "defect": float(defect),
                        "bound": float(bound),
                        "subspace_dim": space.dim,
                        "kernel_cutoff": kernel_cutoff,
                    },
                )


def common_eigenvector_report(
    ms,
    tol: Tolerances = DEFAULT_TOL,
    strategy: ClosureStrategy = ClosureStrategy.NEW_AGAINST_GENERATORS,
) -> SearchReport:
    """Run the full common-eigenvector pipeline and keep the intermediates.

    Pipeline: commuting fast path; otherwise drop linearly dependent
    matrices, generate the Lie closure, intersect the commutator kernels
    into T, and either certify non-existence (T trivial) or find the
    eigenvector of the commuting restrictions on T and lift it back.
    Eigenvalues and residuals of the returned result always refer to the
    original input family.
    """
    mats = as_square_family(ms)
    if pairwise_commuting(mats, tol):
        return SearchReport(common_eigenvector_commuting(mats, tol), True, None, None)
    keep = independent_indices(mats, tol)
    independent = [mats[i] for i in keep]
    closure = generate_lie_algebra(independent, tol, strategy)
    t_space, cutoff = _shemesh_with_cutoff(closure.elements, tol)
    if t_space.dim == 0:
        return SearchReport(None, False, closure, 0)
    if t_space.dim == 1:
        result = verified_result(mats, t_space.basis[:, 0], tol)
        return SearchReport(result, False, closure, 1)
    _assert_restrictions_commute(closure.elements, t_space, tol, cutoff)
    restrictions = [restrict(a, t_space, tol) for a in independent]
    inner = common_eigenvector_commuting(restrictions, tol)
    result = verified_result(mats, t_space.basis @ inner.vector, tol)
    return SearchReport(result, False, closure, t_space.dim)


def common_eigenvector(
    ms,
    tol: Tolerances = DEFAULT_TOL,
    strategy: ClosureStrategy = ClosureStrategy.NEW_AGAINST_GENERATORS,
) -> EigvecResult | None:
    """Common eigenvector of an arbitrary family, or ``None`` if none exists.

    ``None`` is a certificate: the commutator-kernel subspace of the
    generated Lie algebra is trivial, which rules out a common eigenvector.
    """
    return common_eigenvector_report(ms, tol, strategy).result
