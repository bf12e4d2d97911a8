"""tropic: numerical complex and real tropical curves.

Computes the primitive rays (with integer multiplicities) of the complex
tropical curve, and the signed rays of the real tropical curve, of an
algebraic curve given by polynomials with constant coefficients.  The engine
combines homotopy continuation, witness sets, monodromy loops and Cauchy
integrals.
"""

__version__ = "0.1.0"

from .poly import (  # noqa: F401
    LinearForm,
    Polynomial,
    PolySystem,
    RandomizedSystem,
    evaluate,
    homogenize,
    jacobian_eval,
    parse_system,
    randomize,
)
from .tracker import LoopSamples, TrackedPath, TrackSettings, track, track_coordinate_circle  # noqa: F401
from .solver import SolutionSet, solve_on_curve_slice, solve_total_degree  # noqa: F401
from .witness import WitnessSet, build_witness_superset, monodromy_group, move_slice, trace_test  # noqa: F401
from .patch import PatchVector, build_patched_system, draw_patch, map_ray_back, verify_patch  # noqa: F401
from .eoz import EozResult, compute_tau, critical_points  # noqa: F401
from .endgame import (  # noqa: F401
    ValuationResult,
    cauchy_coefficient,
    cycle_number,
    endpoint_estimate,
    valuation_ray,
)
from .trop import (  # noqa: F401
    BoundaryPoints,
    PipelineSettings,
    Ray,
    SignedRay,
    TropicalCurveResult,
    aggregate,
    boundary_points,
    compute_rays,
    trop_complex,
    trop_real,
)
