"""Dense complex matrix primitives.

Commutators, SVD-based numerical kernels, eigenspace extraction through the
Schur form, restriction of a matrix to an invariant subspace, and detection
of scalar multiples of the identity. Everything is plain ``numpy`` on
``complex128`` arrays; all functions are pure and all returned objects are
treated as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import InputError, NonInvariantSubspaceError, NumericalFailureError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "Eigenspace",
    "as_matrix",
    "as_square_family",
    "commutator",
    "kernel",
    "stacked_kernel",
    "schur_eigenspaces",
    "restrict",
    "scalar_multiple_of_identity",
]


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances behind every rank / clustering / residual decision.

    rank_rel
        Singular values at or below ``rank_rel * max(shape) * sigma_max``
        count as zero when determining numerical rank.
    eig_cluster_rel
        Eigenvalues closer than ``eig_cluster_rel * ||A||_F`` (transitively)
        are treated as one eigenvalue.
    residual_rel
        Bound on relative residuals accepted during verification steps.
    """

    rank_rel: float = 2.0 ** -45
    eig_cluster_rel: float = 1e-8
    residual_rel: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "eig_cluster_rel", "residual_rel"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InputError(
                    f"tolerance {name} must lie strictly between 0 and 1, got {value!r}"
                )


DEFAULT_TOL = Tolerances()


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` and return it as a fresh complex128 2-d array.

    Rejects empty shapes and non-finite entries; optionally requires a
    square shape.
    """
    m = np.array(a, dtype=complex, order="C")
    if m.ndim != 2:
        raise InputError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise InputError(f"{name} must have at least one row and column, got {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InputError(f"{name} contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be square, got {m.shape}")
    return m


def as_square_family(ms, name: str = "matrices") -> list[np.ndarray]:
    """Validate a non-empty list of square matrices of one common size."""
    mats = [as_matrix(m, square=True, name=f"{name}[{i}]") for i, m in enumerate(ms)]
    if not mats:
        raise InputError(f"{name} must be non-empty")
    n = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != n:
            raise InputError(
                f"{name}[{i}] has size {m.shape[0]}, expected {n} like {name}[0]"
            )
    return mats


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of C^n carried as an orthonormal column basis.

    ``basis`` has shape ``(ambient_dim, dim)``; ``dim`` may be zero for the
    trivial subspace. Orthonormality is checked on construction.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = self.basis
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise InputError(
                f"basis shape {b.shape} does not match ambient dimension {self.ambient_dim}"
            )
        r = b.shape[1]
        if r > self.ambient_dim:
            raise InputError(f"subspace dimension {r} exceeds ambient {self.ambient_dim}")
        defect = np.linalg.norm(b.conj().T @ b - np.eye(r))
        if defect > 1e-12 * r:
            raise InputError(f"basis columns are not orthonormal (defect {defect:.3e})")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=complex))

    @classmethod
    def trivial(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=complex))

    @classmethod
    def from_columns(cls, columns) -> "Subspace":
        """Re-orthonormalize full-column-rank columns (QR) into a subspace."""
        c = np.asarray(columns, dtype=complex)
        if c.ndim != 2:
            raise InputError("columns must form a 2-d array")
        if c.shape[1] == 0:
            return cls(c.shape[0], c.copy())
        q, _ = np.linalg.qr(c)
        return cls(c.shape[0], q)


@dataclass(frozen=True, eq=False)
class Eigenspace:
    """One clustered eigenvalue together with its geometric eigenspace."""

    value: complex
    space: Subspace


def commutator(a, b) -> np.ndarray:
    """Return ``a @ b - b @ a`` for square matrices of equal size."""
    a = as_matrix(a, square=True, name="a")
    b = as_matrix(b, square=True, name="b")
    if a.shape != b.shape:
        raise InputError(f"commutator needs equal sizes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def _nullspace_basis(m: np.ndarray, cutoff: float) -> np.ndarray:
    """Orthonormal basis of the span of right singular vectors with sigma <= cutoff."""
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.count_nonzero(s > cutoff))
    return vh[rank:].conj().T


def kernel(m, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Numerical null space of ``m``.

    The cutoff is ``rank_rel * max(shape) * sigma_max``, so the all-zero
    matrix maps to the full ambient space.
    """
    m = as_matrix(m, name="m")
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cutoff = tol.rank_rel * max(m.shape) * s[0]
    rank = int(np.count_nonzero(s > cutoff))
    return Subspace(m.shape[1], vh[rank:].conj().T)


def stacked_kernel(ms, tol: Tolerances = DEFAULT_TOL, *, ambient_dim: int | None = None) -> Subspace:
    """Intersection of the kernels of square matrices, via one stacked SVD.

    An empty list yields the full space; ``ambient_dim`` is then required
    (and otherwise only cross-checked).
    """
    mats = [as_matrix(m, square=True, name=f"ms[{i}]") for i, m in enumerate(ms)]
    if not mats:
        if ambient_dim is None:
            raise InputError("ambient_dim is required for an empty stack")
        return Subspace.full(ambient_dim)
    n = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != n:
            raise InputError(f"ms[{i}] has size {m.shape[0]}, expected {n}")
    if ambient_dim is not None and ambient_dim != n:
        raise InputError(f"ambient_dim {ambient_dim} does not match matrix size {n}")
    return kernel(np.vstack(mats), tol)


def _cluster_indices(values: np.ndarray, radius: float) -> list[list[int]]:
    """Group indices of complex values by transitive closeness within radius."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [sorted(g) for g in groups.values()]


def schur_eigenspaces(a, tol: Tolerances = DEFAULT_TOL) -> list[Eigenspace]:
    """Clustered eigenvalues of ``a`` with their geometric eigenspaces.

    Computes a complex Schur form, merges diagonal values that sit within
    ``eig_cluster_rel * ||a||_F`` of each other, and extracts for each
    cluster mean ``lam`` the numerical kernel of ``a - lam*I``. The kernel
    cutoff is tied to the cluster radius rather than to ``rank_rel`` so
    that defective and merged eigenvalues keep a non-empty eigenspace.

    Returns the list ordered by ascending eigenspace dimension, ties broken
    by (real, imag) of the cluster mean. Raises ``NumericalFailureError``
    if the QR iteration fails to converge, if a cluster produces an empty
    eigenspace, or if the dimensions add up to more than ``n``.
    """
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    try:
        t, _ = scipy.linalg.schur(a, output="complex")
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(
            "QR iteration for the Schur form did not converge",
            diagnostics={"size": n},
        ) from exc
    eigs = np.diag(t)
    scale = np.linalg.norm(a)
    radius = tol.eig_cluster_rel * scale
    cutoff = 10.0 * radius
    eye = np.eye(n)
    items = []
    for group in _cluster_indices(eigs, radius):
        lam = complex(np.mean(eigs[group]))
        basis = _nullspace_basis(a - lam * eye, cutoff)
        if basis.shape[1] == 0:
            raise NumericalFailureError(
                "eigenvalue cluster produced an empty eigenspace",
                diagnostics={"eigenvalue": lam, "cluster_size": len(group)},
            )
        items.append(Eigenspace(lam, Subspace(n, basis)))
    items.sort(key=lambda e: (e.space.dim, e.value.real, e.value.imag))
    total = sum(e.space.dim for e in items)
    if total > n:
        raise NumericalFailureError(
            "eigenspace dimensions exceed the ambient dimension",
            diagnostics={"total": total, "ambient": n},
        )
    return items


def restrict(a, s: Subspace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Express ``a`` on the a-invariant subspace ``s`` in its basis coordinates.

    Invariance is verified first: the component of ``a @ B`` outside the
    span of ``B`` must stay below ``residual_rel * ||a||_F``.
    """
    a = as_matrix(a, square=True, name="a")
    if s.ambient_dim != a.shape[0]:
        raise InputError(
            f"subspace ambient dimension {s.ambient_dim} does not match matrix size {a.shape[0]}"
        )
    b = s.basis
    image = a @ b
    inside = b.conj().T @ image
    defect = np.linalg.norm(image - b @ inside)
    bound = tol.residual_rel * np.linalg.norm(a)
    if defect > bound:
        raise NonInvariantSubspaceError(
            "subspace is not invariant under the matrix",
            diagnostics={"defect": float(defect), "bound": float(bound), "dim": s.dim},
        )
    return inside


def scalar_multiple_of_identity(a, tol: Tolerances = DEFAULT_TOL):
    """Return ``lam`` if ``a`` is numerically ``lam * I``, else ``None``."""
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    lam = complex(np.trace(a) / n)
    defect = np.linalg.norm(a - lam * np.eye(n))
    if defect <= tol.residual_rel * max(np.linalg.norm(a), 1.0):
        return lam
    return None
