import numpy as np
import pytest

from coeig import (
    DEFAULT_TOL,
    Eigenspace,
    InputError,
    NonInvariantSubspaceError,
    Subspace,
    Tolerances,
    commutator,
    kernel,
    restrict,
    scalar_multiple_of_identity,
    schur_eigenspaces,
    stacked_kernel,
)

E = np.array([[0, 1], [0, 0]], dtype=complex)
F = np.array([[0, 0], [1, 0]], dtype=complex)


def ginibre(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def span_line_matches(basis, direction):
    """The one-column basis spans the same line as direction."""
    v = basis[:, 0]
    d = direction / np.linalg.norm(direction)
    return abs(np.vdot(d, v)) > 1 - 1e-10


class TestTolerances:
    def test_defaults(self):
        tol = Tolerances()
        assert tol.rank_rel == 2.0 ** -45
        assert tol.eig_cluster_rel == 1e-8
        assert tol.residual_rel == 1e-8

    @pytest.mark.parametrize("kwargs", [
        {"rank_rel": 0.0}, {"rank_rel": -1e-3}, {"eig_cluster_rel": 1.0},
        {"residual_rel": 2.0},
    ])
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(InputError):
            Tolerances(**kwargs)


class TestSubspace:
    def test_full_and_trivial(self):
        assert Subspace.full(3).dim == 3
        assert Subspace.trivial(3).dim == 0

    def test_rejects_non_orthonormal(self):
        with pytest.raises(InputError):
            Subspace(2, np.array([[1.0], [1.0]], dtype=complex))

    def test_rejects_too_many_columns(self):
        with pytest.raises(InputError):
            Subspace(2, np.eye(2, 3, dtype=complex))

    def test_from_columns_reorthonormalizes(self):
        rng = np.random.default_rng(1)
        cols = ginibre(rng, 4)[:, :2] * 3.7
        s = Subspace.from_columns(cols)
        assert s.dim == 2
        # same span as the input columns
        proj = s.basis @ (s.basis.conj().T @ cols)
        np.testing.assert_allclose(proj, cols, atol=1e-12)


class TestCommutator:
    def test_identity_commutes(self):
        rng = np.random.default_rng(2)
        b = ginibre(rng, 3)
        np.testing.assert_array_equal(commutator(np.eye(3), b), np.zeros((3, 3)))

    def test_diagonals_commute(self):
        c = commutator(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
        np.testing.assert_array_equal(c, np.zeros((2, 2)))

    def test_sl2_bracket(self):
        np.testing.assert_array_equal(commutator(E, F), np.diag([1.0, -1.0]))

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = ginibre(rng, 4), ginibre(rng, 4)
            np.testing.assert_array_equal(commutator(a, b), -commutator(b, a))

    def test_size_mismatch(self):
        with pytest.raises(InputError):
            commutator(np.eye(2), np.eye(3))


class TestKernel:
    def test_zero_matrix_full_space(self):
        assert kernel(np.zeros((3, 3))).dim == 3

    def test_identity_trivial(self):
        assert kernel(np.eye(3)).dim == 0

    def test_single_constraint(self):
        # rows read: -y = 0, 0 = 0, so the kernel is the x axis
        s = kernel(np.array([[0.0, -1.0], [0.0, 0.0]]))
        assert s.dim == 1
        assert span_line_matches(s.basis, np.array([1.0, 0.0]))

    def test_soundness_on_rank_deficient(self):
        rng = np.random.default_rng(4)
        tol = DEFAULT_TOL
        for _ in range(30):
            n = int(rng.integers(2, 7))
            r = int(rng.integers(1, n))
            m = ginibre(rng, n)[:, :r] @ ginibre(rng, n)[:r, :]
            s = kernel(m)
            assert s.dim == n - r
            smax = np.linalg.svd(m, compute_uv=False)[0]
            for col in s.basis.T:
                assert np.linalg.norm(m @ col) <= 10 * tol.rank_rel * n * smax


class TestStackedKernel:
    def test_empty_list_full_space(self):
        assert stacked_kernel([], ambient_dim=4).dim == 4

    def test_empty_list_needs_dimension(self):
        with pytest.raises(InputError):
            stacked_kernel([])

    def test_disjoint_kernels(self):
        s = stacked_kernel([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        assert s.dim == 0

    def test_single_matrix_matches_kernel(self):
        m = np.array([[0.0, -1.0], [0.0, 0.0]])
        s = stacked_kernel([m])
        assert s.dim == 1
        assert span_line_matches(s.basis, np.array([1.0, 0.0]))

    def test_matches_iterated_intersection(self):
        # independent oracle: dim(U cap V) = dim U + dim V - rank([U V])
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, 4))
            mats, kernels = [], []
            for _ in range(k):
                corank = int(rng.integers(0, n + 1))
                b = np.linalg.qr(ginibre(rng, n))[0][:, :corank]
                proj = np.eye(n) - b @ b.conj().T
                mats.append(ginibre(rng, n) @ proj)
                kernels.append(b)
            current = np.eye(n, dtype=complex)
            for b in kernels:
                joint = np.hstack([current, b])
                expected = current.shape[1] + b.shape[1] - np.linalg.matrix_rank(joint)
                if expected == 0:
                    current = np.zeros((n, 0), dtype=complex)
                    continue
                null = np.linalg.svd(np.hstack([current, -b]), full_matrices=True)[2]
                coeff = null[current.shape[1] + b.shape[1] - expected:].conj().T
                current = np.linalg.qr(current @ coeff[: current.shape[1]])[0]
            assert stacked_kernel(mats).dim == current.shape[1]

    def test_size_mismatch(self):
        with pytest.raises(InputError):
            stacked_kernel([np.eye(2), np.eye(3)])


class TestSchurEigenspaces:
    def test_distinct_diagonal(self):
        items = schur_eigenspaces(np.diag([1.0, 2.0, 3.0]))
        assert [pytest.approx(e.value) for e in items] == [1.0, 2.0, 3.0]
        for e, axis in zip(items, np.eye(3)):
            assert e.space.dim == 1
            assert span_line_matches(e.space.basis, axis)

    def test_identity_single_cluster(self):
        items = schur_eigenspaces(np.eye(2))
        assert len(items) == 1
        assert items[0].value == pytest.approx(1.0)
        assert items[0].space.dim == 2

    def test_jordan_block_geometric_multiplicity(self):
        items = schur_eigenspaces(E)
        assert len(items) == 1
        assert items[0].value == pytest.approx(0.0)
        assert items[0].space.dim == 1
        assert span_line_matches(items[0].space.basis, np.array([1.0, 0.0]))

    def test_residual_bound_and_dimension_sum(self):
        rng = np.random.default_rng(6)
        tol = DEFAULT_TOL
        for _ in range(25):
            n = int(rng.integers(2, 7))
            a = ginibre(rng, n)
            items = schur_eigenspaces(a)
            scale = np.linalg.norm(a)
            total = 0
            for e in items:
                total += e.space.dim
                for col in e.space.basis.T:
                    assert np.linalg.norm(a @ col - e.value * col) <= 1e3 * tol.eig_cluster_rel * scale
            assert total <= n

    def test_normal_matrices_cover_the_space(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            u = np.linalg.qr(ginibre(rng, n))[0]
            a = u @ np.diag(rng.standard_normal(n) + 1j * rng.standard_normal(n)) @ u.conj().T
            items = schur_eigenspaces(a)
            assert sum(e.space.dim for e in items) == n

    def test_ordering_is_dimension_then_value(self):
        items = schur_eigenspaces(np.diag([5.0, 5.0, 1.0]))
        assert [e.space.dim for e in items] == [1, 2]
        assert items[0].value == pytest.approx(1.0)


class TestRestrict:
    def test_coordinate_subspace(self):
        s = Subspace(3, np.eye(3, dtype=complex)[:, :2])
        np.testing.assert_allclose(restrict(np.diag([1.0, 2.0, 3.0]), s), np.diag([1.0, 2.0]))

    def test_full_space_is_identity_restriction(self):
        rng = np.random.default_rng(8)
        a = ginibre(rng, 4)
        np.testing.assert_allclose(restrict(a, Subspace.full(4)), a, atol=1e-14)

    def test_single_coordinate(self):
        s = Subspace(2, np.eye(2, dtype=complex)[:, 1:])
        np.testing.assert_allclose(restrict(np.diag([1.0, 2.0]), s), [[2.0]])

    def test_non_invariant_raises(self):
        s = Subspace(2, np.eye(2, dtype=complex)[:, :1])
        with pytest.raises(NonInvariantSubspaceError):
            restrict(F, s)  # F e1 = e2, leaves the subspace

    def test_restricted_spectrum_is_a_subset(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            v = ginibre(rng, n)
            eigs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            a = v @ np.diag(eigs) @ np.linalg.inv(v)
            r = int(rng.integers(1, n + 1))
            pick = rng.permutation(n)[:r]
            s = Subspace.from_columns(v[:, pick])
            restricted_eigs = np.linalg.eigvals(restrict(a, s))
            for lam in restricted_eigs:
                assert np.min(np.abs(eigs - lam)) <= 1e-6 * np.linalg.norm(a)


class TestScalarMultipleOfIdentity:
    def test_scalar(self):
        assert scalar_multiple_of_identity(5.0 * np.eye(3)) == pytest.approx(5.0)

    def test_zero(self):
        assert scalar_multiple_of_identity(np.zeros((2, 2))) == pytest.approx(0.0)

    def test_non_scalar_diagonal(self):
        assert scalar_multiple_of_identity(np.diag([1.0, 2.0])) is None


class TestInputValidation:
    def test_non_finite_entries_rejected(self):
        with pytest.raises(InputError):
            kernel(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        with pytest.raises(InputError):
            kernel(np.array([[np.inf, 0.0], [0.0, 1.0]]))

    def test_empty_shapes_rejected(self):
        with pytest.raises(InputError):
            kernel(np.zeros((0, 3)))
