"""Reconstruction of bivariate functions from weighted edge integrals on triangular meshes.

The package builds local polynomial reconstructions whose degrees of freedom
are integrals along triangle edges weighted by a probability density (with
higher moments taken against the density's orthogonal polynomials) plus
interior moments for orders above two.  It ships the two-parameter Jacobi
density family, a classical linear baseline, parameter tuning by grid
search, and a benchmark harness with a CLI.
"""

from .density import (
    CustomDensity,
    Density,
    GegenbauerDensity,
    JacobiDensity,
    MomentSequence,
    UniformDensity,
    beta_fn,
    jacobi_normalization,
)
from .estimators import ClassicalHistopolation, EnrichedHistopolation
from .functionals import (
    DofDescriptor,
    Scheme,
    dof_count,
    dof_descriptors,
    dof_vector,
    edge_mean,
    edge_moment,
    interior_moment,
)
from .mesh import (
    Mesh,
    MeshParseError,
    OutOfDomainError,
    Triangle,
    friedrichs_keller,
    read_mesh,
    write_mesh,
)
from .operators import (
    BernsteinBasis,
    DofMatrix,
    LocalBasis,
    QuadraticCoeffs,
    Reconstruction,
    UnisolvencyError,
    classical_ch,
    dof_matrix,
    duality_matrix,
    general_basis,
    make_scheme,
    quadratic_basis,
    quadratic_coeffs,
    quadratic_coeffs_jacobi,
    reconstruct_global,
    reconstruct_local,
)
from .orthopoly import (
    GaussRule,
    MomentConditioningError,
    MonicPolynomial,
    OrthoBasis,
    gauss_rule,
    monic_pi2,
    monic_sequence,
    rho2,
    rho2_gegenbauer,
    rho2_jacobi,
    tau_gegenbauer,
)
from .bench import TEST_FUNCTIONS, TestFunction, lp_error, run_convergence, test_function
from .tuning import TuningReport, default_grid, grid_search, total_error
from .triquad import TriangleRule, composite_rule, triangle_rule

__version__ = "0.1.0"

__all__ = [
    "CustomDensity", "Density", "GegenbauerDensity", "JacobiDensity",
    "MomentSequence", "UniformDensity", "beta_fn", "jacobi_normalization",
    "ClassicalHistopolation", "EnrichedHistopolation",
    "DofDescriptor", "Scheme", "dof_count", "dof_descriptors", "dof_vector",
    "edge_mean", "edge_moment", "interior_moment",
    "Mesh", "MeshParseError", "OutOfDomainError", "Triangle",
    "friedrichs_keller", "read_mesh", "write_mesh",
    "BernsteinBasis", "DofMatrix", "LocalBasis", "QuadraticCoeffs",
    "Reconstruction", "UnisolvencyError", "classical_ch", "dof_matrix",
    "duality_matrix", "general_basis", "make_scheme", "quadratic_basis",
    "quadratic_coeffs", "quadratic_coeffs_jacobi", "reconstruct_global",
    "reconstruct_local",
    "GaussRule", "MomentConditioningError", "MonicPolynomial", "OrthoBasis",
    "gauss_rule", "monic_pi2", "monic_sequence", "rho2", "rho2_gegenbauer",
    "rho2_jacobi", "tau_gegenbauer",
    "TEST_FUNCTIONS", "TestFunction", "lp_error", "run_convergence", "test_function",
    "TuningReport", "default_grid", "grid_search", "total_error",
    "TriangleRule", "composite_rule", "triangle_rule",
]
