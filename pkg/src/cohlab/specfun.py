"""Special functions used by the Laplace-inversion machinery.

Only the four functions the branch-cut denominators and the closed-form
bath correlation actually need: the exponential integrals E1 (complex,
principal branch) and Ei (real, principal value), Dawson's integral, and
the Gamma function for positive real argument.

Backed by scipy.special, which meets the accuracy contracts below; the
test suite re-derives reference values from independent high-precision
series/continued-fraction/quadrature oracles.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

__all__ = ["e1_complex", "ei_real", "dawson", "gamma_real"]

# exp(-z) overflows double precision beyond this
_EXP_OVERFLOW = 709.0


def e1_complex(z: complex) -> complex:
    """Exponential integral E1(z) = ∫_1^∞ e^{-zt}/t dt, continued to complex z.

    Principal branch, with the branch cut along the negative real axis.
    Relative accuracy better than 1e-12 away from the cut.

    Raises
    ------
    ValueError
        If z = 0 or z lies on the branch cut (negative real axis).
    OverflowError
        If |E1(z)| ~ e^{-Re z}/|z| exceeds double-precision range.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("E1 is singular at z = 0")
    if z.imag == 0.0 and z.real < 0.0:
        raise ValueError(
            "z on the branch cut of E1 (negative real axis); "
            "evaluate just above/below the cut or use -ei_real(-z) -/+ i*pi"
        )
    if -z.real > _EXP_OVERFLOW + math.log(abs(z)):
        raise OverflowError(f"E1({z}) overflows double precision")
    out = complex(_sp.exp1(z))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError(f"E1({z}) did not evaluate to a finite value")
    return out


def ei_real(x: float) -> float:
    """Principal-value exponential integral Ei(x) for x > 0.

    Ei(x) = PV ∫_{-∞}^x e^t/t dt, accurate to better than 1e-12 relative.
    Connects to E1 across the cut through E1(x e^{±iπ}) = -Ei(x) ∓ iπ.
    """
    x = float(x)
    if x <= 0.0:
        raise ValueError("ei_real requires x > 0")
    out = float(_sp.expi(x))
    if not math.isfinite(out):
        raise OverflowError(f"Ei({x}) overflows double precision")
    return out


def dawson(x: float | np.ndarray) -> float | np.ndarray:
    """Dawson's integral F(x) = e^{-x²} ∫_0^x e^{t²} dt.

    Defined for all real x; absolute accuracy better than 1e-12.
    Accepts scalars or arrays (vectorized for the branch-cut integrands).
    """
    out = _sp.dawsn(x)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def gamma_real(x: float) -> float:
    """Gamma function Γ(x) for x > 0, relative accuracy better than 1e-12."""
    x = float(x)
    if x <= 0.0:
        raise ValueError("gamma_real requires x > 0")
    return math.gamma(x)
