"""Tolerances and default node counts shared by every module.

The relative quadrature tolerance may be overridden through the
``AGGSTEADY_RTOL`` environment variable.
"""

import os
from dataclasses import dataclass

RTOL_ENV = "AGGSTEADY_RTOL"


@dataclass(frozen=True)
class Tolerances:
    rel_tol: float = 1e-9
    nodes: int = 256
    # radial/angular node counts used by the ball convolution
    ray_nodes: int = 96
    angle_nodes: int = 96
    pv_panel_nodes: int = 40
    validity: float = 1e-10
    profile_points: int = 512
    log_kernel_step: float = 1e-4


def _from_env():
    tol = Tolerances()
    value = os.environ.get(RTOL_ENV)
    if value:
        tol = Tolerances(rel_tol=float(value))
    return tol


DEFAULTS = _from_env()
