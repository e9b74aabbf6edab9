"""Exact and numerical geometry of the two-plectic six-sphere."""

from .octonions import EPSILON, EpsilonTable, Octonion, cross, omega_tilde
from .g2 import compute_g2_basis, g2_basis
from .sphere import NORTH, SpherePoint, TangentVector, nijenhuis_closed, nijenhuis_oracle
from .hdw import hdw_dim1, hdw_dim2, theta_tilde
from .flows import flow_dim1, flow_dim2, drift_report, orbit_closure_classify, matrix_exp

__version__ = "0.1.0"

__all__ = [
    "EPSILON",
    "EpsilonTable",
    "NORTH",
    "Octonion",
    "SpherePoint",
    "TangentVector",
    "compute_g2_basis",
    "cross",
    "drift_report",
    "flow_dim1",
    "flow_dim2",
    "g2_basis",
    "hdw_dim1",
    "hdw_dim2",
    "matrix_exp",
    "nijenhuis_closed",
    "nijenhuis_oracle",
    "omega_tilde",
    "orbit_closure_classify",
    "theta_tilde",
]
