"""Common eigenvectors and simultaneous unitary triangulation of complex matrices.

Given matrices A_1..A_k, the package computes a unit vector v with
A_i v = lambda_i v for all i, or certifies that none exists, and uses
repeated eigenvector extraction to triangulate all matrices in one unitary
basis. The general case reduces to commuting matrices on the intersection
of the kernels of all pairwise commutators of the generated Lie algebra.
"""

from .exceptions import (
    CoeigError,
    DependentGeneratorsError,
    InputError,
    NonInvariantSubspaceError,
    NumericalFailureError,
    RefusedInstanceError,
)
from .linalg import (
    DEFAULT_TOL,
    Eigenspace,
    Subspace,
    Tolerances,
    commutator,
    kernel,
    restrict,
    scalar_multiple_of_identity,
    schur_eigenspaces,
    stacked_kernel,
)
from .lie_closure import (
    ClosureStats,
    ClosureStrategy,
    IndependenceTracker,
    LieBasis,
    closure_residual_max,
    generate_lie_algebra,
    independent_indices,
    iteration_count,
    remove_linearly_dependent,
    span_residual,
)
from .eigvec import (
    EigvecResult,
    SearchReport,
    common_eigenvector,
    common_eigenvector_commuting,
    common_eigenvector_report,
    pairwise_commuting,
    shemesh_subspace,
    verified_result,
)
from .triangulate import (
    TriangulationReport,
    TriangulationResult,
    is_simultaneously_triangulable,
    simultaneous_triangulation,
    triangulation_report,
)
from .oracle import (
    InstanceKind,
    InstanceSpec,
    brute_force_common_eigenvector,
    make_instance,
)

__version__ = "0.1.0"
