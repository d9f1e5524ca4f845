"""Reference search and seeded instance generators for cross-checking.

The brute-force search tries every combination of per-matrix eigenvalues
and keeps the combinations whose shifted kernels intersect non-trivially.
It is exponential in the number of matrices and exists purely as a desk-
scale verification oracle for the main pipeline.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, RefusedInstanceError
from .eigvec import EigvecResult, verified_result
from .linalg import DEFAULT_TOL, Tolerances, as_square_family, schur_eigenspaces, stacked_kernel

__all__ = [
    "COMBINATION_LIMIT",
    "InstanceKind",
    "InstanceSpec",
    "brute_force_common_eigenvector",
    "make_instance",
]

COMBINATION_LIMIT = 10 ** 6

SL2_E = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SL2_F = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SL2_H = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def brute_force_common_eigenvector(ms, tol: Tolerances = DEFAULT_TOL) -> list[EigvecResult]:
    """All common eigenvectors found by exhaustive eigenvalue combination.

    For every tuple in the Cartesian product of the matrices' clustered
    eigenvalue lists (lexicographic order), the kernel of the stacked
    shifted matrices is computed; each non-trivial intersection yields one
    verified result. Refuses instances with ``n ** k > 10**6``.
    """
    mats = as_square_family(ms)
    n = mats[0].shape[0]
    k = len(mats)
    if n ** k > COMBINATION_LIMIT:
        raise RefusedInstanceError(
            f"{n}^{k} eigenvalue combinations exceed the guard of {COMBINATION_LIMIT}"
        )
    eigenvalue_lists = [[e.value for e in schur_eigenspaces(a, tol)] for a in mats]
    eye = np.eye(n)
    results = []
    for combo in itertools.product(*eigenvalue_lists):
        shifted = [a - lam * eye for a, lam in zip(mats, combo)]
        space = stacked_kernel(shifted, tol)
        if space.dim >= 1:
            results.append(verified_result(mats, space.basis[:, 0], tol))
    return results


class InstanceKind(enum.Enum):
    """Families of seeded test instances."""

    TRIANGULABLE_CONJUGATED = "triangulable-conjugated"
    COMMUTING_POLYNOMIALS = "commuting-polynomials"
    GENERIC_RANDOM = "generic-random"
    SL2_EMBEDDED = "sl2-embedded"


@dataclass(frozen=True)
class InstanceSpec:
    """Seed-deterministic description of a generated matrix family."""

    n: int
    k: int
    kind: InstanceKind
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "kind", InstanceKind(self.kind))
        if self.n < 1 or self.k < 1:
            raise InputError(f"instance sizes must be positive, got n={self.n}, k={self.k}")


def _ginibre(rng, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def _haar_unitary(rng, n: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with phase-fixed R."""
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0.0, d / np.abs(d), 1.0)
    return q * phases


def make_instance(spec: InstanceSpec) -> list[np.ndarray]:
    """Materialize the matrix family described by ``spec``.

    - TRIANGULABLE_CONJUGATED: random upper-triangular matrices conjugated
      by one Haar-random unitary; simultaneously triangulable by construction.
    - COMMUTING_POLYNOMIALS: random polynomials of degree < n in a single
      random matrix; pairwise commuting by construction.
    - GENERIC_RANDOM: independent complex Gaussian matrices.
    - SL2_EMBEDDED: the matrices E, F, H (cycled) in the top-left 2x2 block,
      padded with a fresh random diagonal elsewhere. For n = 2 and k = 2
      this is exactly {E, F}, which has no common eigenvector; for n > 2
      the padded diagonal block contributes shared coordinate eigenvectors.
    """
    rng = np.random.default_rng(spec.seed)
    n, k = spec.n, spec.k
    if spec.kind is InstanceKind.TRIANGULABLE_CONJUGATED:
        uppers = [np.triu(_ginibre(rng, n)) for _ in range(k)]
        u = _haar_unitary(rng, n)
        return [u.conj().T @ t @ u for t in uppers]
    if spec.kind is InstanceKind.COMMUTING_POLYNOMIALS:
        a = _ginibre(rng, n)
        powers = [np.eye(n, dtype=complex)]
        for _ in range(n - 1):
            powers.append(powers[-1] @ a)
        coeffs = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        return [sum(c * p for c, p in zip(row, powers)) for row in coeffs]
    if spec.kind is InstanceKind.GENERIC_RANDOM:
        return [_ginibre(rng, n) for _ in range(k)]
    if spec.kind is InstanceKind.SL2_EMBEDDED:
        if n < 2:
            raise InputError("sl2-embedded instances need n >= 2")
        base = [SL2_E, SL2_F, SL2_H]
        mats = []
        for i in range(k):
            m = np.zeros((n, n), dtype=complex)
            m[:2, :2] = base[i % 3]
            if n > 2:
                pad = rng.standard_normal(n - 2) + 1j * rng.standard_normal(n - 2)
                m[np.arange(2, n), np.arange(2, n)] = pad
            mats.append(m)
        return mats
    raise InputError(f"unknown instance kind {spec.kind!r}")
