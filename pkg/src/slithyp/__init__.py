"""Hyperbolic geometry, conformal maps and iteration on planar slit domains."""

__version__ = "0.1.0"

from .errors import ContractError, ConvergenceError, SlithypError  # noqa: E402
from .hyperbolic import (  # noqa: E402
    Horocycle,
    busemann_disk,
    cayley,
    cayley_inverse,
    disk_density,
    disk_distance,
    halfplane_density,
    halfplane_distance,
    horocycle_contains,
    horocycle_euclidean,
)
from .domains import SlitDomain, ToothSequence, Polyline, make_comb, make_petersen  # noqa: E402
from .bounds import BoundPair, curve_length_bounds, distance_upper, corridor_lower_bound  # noqa: E402
from .conformal import ConformalMap, fit_map, conformal_distance, geodesic_ray, pushforward_horocycle  # noqa: E402
from .dynamics import (  # noqa: E402
    Blaschke,
    MobiusSelfMap,
    SelfMap,
    classify,
    conjugated_orbit,
    denjoy_wolff_point,
    divergence_rate,
    iterate,
    julia_invariance_check,
)
from .horolab import busemann_horosphere_contact, cluster_set, h_limit_test  # noqa: E402
from .reports import comb_localization_report, comb_report, petersen_report  # noqa: E402
