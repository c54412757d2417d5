"""Symmetric infinitesimal rigidity on Euclidean, spherical and point-hyperplane frameworks."""
from .errors import SymRigidError
from .forced import (
    CombinatorialVerdict,
    ForcedReport,
    OrbitMatrix,
    combinatorial_verdict,
    forced_rigidity,
    orbit_matrix,
)
from .frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    RigidityReport,
    SphericalFramework,
    Symmetry,
    analyze,
    rigidity_matrix,
    sample_regular,
    sample_symmetric,
    trivial_motion_basis,
)
from .groups import SymmetryGroup, Subgroup, from_generators, make_schoenflies
from .numerics import TolerancePolicy, rank
from .symgraph import (
    GainGraph,
    SymmetricGraph,
    has_spanning_gain_tight,
    is_gain_sparse,
    is_gain_tight,
    lift,
    make_gain_graph,
    make_symmetric_graph,
    quotient,
)
from .transfer import (
    double_cover,
    pair_with_fixed,
    pairing_transform,
    partial_inversion,
    project_ph_to_sphere,
    project_sphere_to_ph,
    rotate,
)

__version__ = "0.1.0"
