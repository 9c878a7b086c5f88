"""Exact construction and classification of fans arising as Mahavier products
of the two-segment relation ``L_r ∪ L_rho`` on ``[0, 1]``."""

from .classify import FanKind, classify, lelek_density_audit, structure_report
from .errors import BudgetExceeded, InvalidInput, InvariantFailure, LelekfanError, PrimeBoundExceeded
from .exactnum import (
    ExponentPair,
    Ordering,
    PrimeSignature,
    SlopePair,
    compare_power_product,
    factor_signature,
    format_rational,
    is_never_connect,
    multiplicative_dependence,
    parse_rational,
)
from .itinerary import (
    EndpointVector,
    Itinerary,
    branch_param,
    build_sup_itinerary,
    endpoint_vector,
    is_useful_periodic,
    prefix_products,
)
from .mahavier import (
    Branch,
    BranchSet,
    PointCloud,
    SegmentRelation,
    branch_diameter,
    cube_metric,
    endpoint_certificate,
    endpoints,
    finite_mahavier,
    hausdorff,
    inverse_relation,
    project,
    relation_union,
    shift,
)
from .orbits import (
    OrbitClass,
    OrbitEntry,
    OrbitWindow,
    between_witness,
    enumerate_orbit,
    find_exponents,
    greedy_orbit,
    max_gap,
)

__version__ = "0.1.0"
