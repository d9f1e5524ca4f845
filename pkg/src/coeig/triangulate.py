"""Simultaneous unitary triangulation by common-eigenvector deflation.

At block size m the common-eigenvector pipeline runs on the trailing m x m
blocks; the found vector is reflected onto e_1 by a Householder map, the
blocks are conjugated, and the loop descends to size m - 1. Failure to find
an eigenvector at any depth certifies that no simultaneous triangulation
exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalFailureError
from .eigvec import common_eigenvector
from .linalg import DEFAULT_TOL, Tolerances, as_square_family

__all__ = [
    "TriangulationResult",
    "TriangulationReport",
    "triangulation_report",
    "simultaneous_triangulation",
    "is_simultaneously_triangulable",
]


@dataclass(frozen=True, eq=False)
class TriangulationResult:
    """Unitary change of basis with the resulting upper-triangular forms.

    ``triangs[i]`` is ``q* @ A_i @ q``; ``diagonal_sequences[i]`` is its
    diagonal, i.e. the eigenvalues of ``A_i`` ordered along the flag.
    """

    q: np.ndarray
    triangs: list[np.ndarray]
    diagonal_sequences: list[np.ndarray]


@dataclass(frozen=True, eq=False)
class TriangulationReport:
    """Triangulation outcome; ``failure_depth`` is set when no flag exists."""

    result: TriangulationResult | None
    failure_depth: int | None


def _householder_to_e1(v: np.ndarray) -> np.ndarray:
    """Hermitian unitary reflection sending the unit vector ``v`` to a multiple of e1."""
    m = v.shape[0]
    if m == 1:
        return np.ones((1, 1), dtype=complex)
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0.0 else 1.0
    w = v.astype(complex, copy=True)
    w[0] += phase
    w /= np.linalg.norm(w)
    return np.eye(m, dtype=complex) - 2.0 * np.outer(w, w.conj())


def _verified_result(mats, q, tol: Tolerances) -> TriangulationResult:
    n = q.shape[0]
    unitary_defect = np.linalg.norm(q.conj().T @ q - np.eye(n))
    if unitary_defect > 1e-10 * n:
        raise NumericalFailureError(
            "accumulated basis change is not unitary",
            diagnostics={"defect": float(unitary_defect), "bound": 1e-10 * n},
        )
    triangs = [q.conj().T @ a @ q for a in mats]
    for i, (a, t) in enumerate(zip(mats, triangs)):
        scale = np.linalg.norm(a)
        lower = np.max(np.abs(np.tril(t, -1))) if n > 1 else 0.0
        if lower > tol.residual_rel * scale:
            raise NumericalFailureError(
                "transformed matrix is not upper triangular within tolerance",
                diagnostics={"matrix": i, "max_lower": float(lower),
                             "bound": float(tol.residual_rel * scale)},
            )
        recon = np.linalg.norm(q @ t @ q.conj().T - a)
        if recon > 1e-8 * scale:
            raise NumericalFailureError(
                "triangular form does not reconstruct the input",
                diagnostics={"matrix": i, "error": float(recon), "bound": float(1e-8 * scale)},
            )
    return TriangulationResult(q, triangs, [np.diag(t).copy() for t in triangs])


def triangulation_report(ms, tol: Tolerances = DEFAULT_TOL) -> TriangulationReport:
    """Deflation loop returning the triangulation or the depth where it stopped.

    Numerical failures raised by the eigenvector pipeline are re-raised
    with the deflation depth added to their diagnostics.
    """
    mats = as_square_family(ms)
    n = mats[0].shape[0]
    q = np.eye(n, dtype=complex)
    current = [a.copy() for a in mats]
    for depth in range(n - 1):
        blocks = [c[depth:, depth:] for c in current]
        try:
            found = common_eigenvector(blocks, tol)
        except NumericalFailureError as exc:
            exc.diagnostics.setdefault("deflation_depth", depth)
            raise
        if found is None:
            return TriangulationReport(None, depth)
        reflector = np.eye(n, dtype=complex)
        reflector[depth:, depth:] = _householder_to_e1(found.vector)
        q = q @ reflector
        current = [reflector @ c @ reflector for c in current]
    return TriangulationReport(_verified_result(mats, q, tol), None)


def simultaneous_triangulation(ms, tol: Tolerances = DEFAULT_TOL) -> TriangulationResult | None:
    """One unitary Q making every input upper triangular, or ``None``."""
    return triangulation_report(ms, tol).result


def is_simultaneously_triangulable(ms, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the family admits a simultaneous unitary triangulation."""
    return triangulation_report(ms, tol).result is not None
