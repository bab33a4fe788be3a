"""Numerical toolkit for p-moduli of ring curve families, ring Q-homeomorphism
checks and growth bounds at infinity for p > n."""

__version__ = "0.1.0"

from .bounds import (AsymptoticBound, BoundReport, GrowthRegime, PowerLawMajorant,
                     asymptotic_constant, capacity_lower_bound, growth_lower_bound_finite,
                     liminf_estimate, volume_lower_bound)
from .errors import ConvergenceError, DomainError, RegimeError, UnsupportedExponentError
from .geometry import (BallCondenser, SphericalRing, ball_volume, unit_ball_volume,
                       unit_sphere_area)
from .maps import (GrowthSweep, LogPowerProfile, PiecewiseProfile, PowerProfile, RadialProfile,
                   TabulatedProfile, apply, growth_sweep, image_ball_volume, make_f1, make_f2,
                   sup_distortion, verify_ring_q)
from .modulus import (DiscreteDensity, RingModulusResult, admissibility_check,
                      ring_modulus_exact, ring_modulus_grid)
from .qfield import (ConstantQ, GeneralQ, PiecewisePowerQ, PowerLawQ, QField, TabulatedRadialQ,
                     prop1_bound, prop1_integral, ring_functional, ring_inequality_sample_check,
                     spherical_mean)
from .quadrature import QuadratureSpec
