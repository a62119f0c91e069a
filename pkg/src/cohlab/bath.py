"""Bath model: spectral density family, correlation function, and the
frequency-domain denominators entering the Laplace inversion.

The spectral density is a power law with exponential cutoff,

    J(ω) = 2π η_s ω (ω/ω_c)^{s-1} e^{-ω/ω_c},   η_s = η_0 (e/s)^s,

scaled so that the peak height 2π η_0 ω_c at ω = s ω_c is the same for
every power s.  At zero temperature the noise correlation function is the
half-range Fourier transform of J, which evaluates in closed form to

    g(t) = η_s ω_c² Γ(s+1) / (1 + i ω_c t)^{s+1}

(principal branch).  The closed form is gated against direct quadrature of
the defining integral in the test suite.

All frequencies are nondimensionalized by ω_c internally; τ_c = 1/ω_c only
appears at the API boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp
from scipy.integrate import quad

from .specfun import gamma_real

__all__ = [
    "BathSpec",
    "spectral_density",
    "correlation",
    "inversion_denominator",
    "imaginary_axis_denominator",
    "imaginary_axis_denominator_derivative",
    "pv_power_exp",
]

_HAND_DERIVED_S = (0.5, 1.0, 3.0)


@dataclass(frozen=True)
class BathSpec:
    """Spectral-density parameters (s, η_0, ω_c).

    s : power of the low-frequency behaviour (sub-Ohmic s<1, Ohmic s=1,
        super-Ohmic s>1); any s > 0 is supported.
    eta0 : dimensionless coupling strength (peak height is 2π η_0 ω_c).
    omega_c : cutoff frequency; unity in all reference configurations.
    """

    s: float
    eta0: float
    omega_c: float = 1.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"power s must be > 0, got {self.s}")
        if self.eta0 < 0:
            raise ValueError(f"coupling eta0 must be >= 0, got {self.eta0}")
        if not self.omega_c > 0:
            raise ValueError(f"cutoff omega_c must be > 0, got {self.omega_c}")

    @property
    def eta_s(self) -> float:
        """Scaled coupling η_s = η_0 (e/s)^s; recomputed, never stored."""
        return self.eta0 * (np.e / self.s) ** self.s

    @property
    def has_hand_derived_denominator(self) -> bool:
        return any(self.s == v for v in _HAND_DERIVED_S)


def spectral_density(spec: BathSpec, omega):
    """J(ω) = 2π η_s ω (ω/ω_c)^{s-1} e^{-ω/ω_c} for ω ≥ 0 (vectorized)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral_density requires omega >= 0")
    x = w / spec.omega_c
    # x**s handles the ω=0 limit (J→0 for s>0) without a 0**(s-1) warning
    out = 2.0 * np.pi * spec.eta_s * spec.omega_c * x**spec.s * np.exp(-x)
    return float(out) if np.ndim(omega) == 0 else out


def correlation(spec: BathSpec, t):
    """Noise correlation g(t) = ∫_0^∞ dω/2π J(ω) e^{-iωt} in closed form.

    g(t) = η_s ω_c² Γ(s+1) / (1 + i ω_c t)^{s+1}, principal branch.
    Valid for t ≥ 0 (and in fact all real t).
    """
    tt = np.asarray(t, dtype=float)
    g0 = spec.eta_s * spec.omega_c**2 * gamma_real(spec.s + 1.0)
    out = g0 / (1.0 + 1j * spec.omega_c * tt) ** (spec.s + 1.0)
    return complex(out) if np.ndim(t) == 0 else out


def pv_power_exp(s: float, w: float) -> float:
    """PV ∫_0^∞ x^s e^{-x} / (x - w) dx for w > 0.

    Computed by symmetric splitting around the singularity: on [0, 2w] the
    principal value of the constant f(w)/(x-w) vanishes by symmetry, so

        PV = ∫_0^{2w} (f(x)-f(w))/(x-w) dx + ∫_{2w}^∞ f(x)/(x-w) dx,

    with f(x) = x^s e^{-x} and a regular first integrand.
    """
    if w <= 0:
        raise ValueError("pv_power_exp requires w > 0")
    fw = w**s * np.exp(-w)

    def regular(x):
        if x == w:
            return (s / w - 1.0) * fw
        return (x**s * np.exp(-x) - fw) / (x - w)

    r1, _ = quad(regular, 0.0, 2.0 * w, points=[w], limit=400)
    r2, _ = quad(lambda x: x**s * np.exp(-x) / (x - w), 2.0 * w, np.inf, limit=400)
    return r1 + r2


def _denominator_generic(spec: BathSpec, w0: float, w: np.ndarray) -> np.ndarray:
    es = spec.eta_s
    out = np.empty(w.shape, dtype=complex)
    for idx, wi in np.ndenumerate(w):
        pv = pv_power_exp(spec.s, wi) if es != 0.0 else 0.0
        out[idx] = w0 - wi - es * (pv + 1j * np.pi * wi**spec.s * np.exp(-wi))
    return out


def inversion_denominator(spec: BathSpec, omega0: float, omega, *, allow_generic: bool = True):
    """Branch-cut denominator B(ω) of the Laplace inversion, ω > 0.

    B is the analytic continuation of the denominator of û(z) onto the
    right side of the cut (z = -iω + 0⁺), divided by i; the inversion reads
    u(t) ∋ (1/π) ∫_0^∞ Im{1/B(ω)} e^{-iω ω_c t} dω.  Arguments are physical;
    ω and ω_0 are scaled by ω_c internally.  Hand-derived closed forms:

        s = 3  : (ω0τc - 2η_s) - (1+η_s)ω - η_s ω² - η_s ω³ e^{-ω}(-Ei(ω)+iπ)
        s = 1  : (ω0τc - η_s) - ω[1 + η_s e^{-ω}(-Ei(ω)+iπ)]
        s = 1/2: (ω0τc - √π η_s) - ω - iπη_s √ω (e^{-ω} + i(2/√π)F(√ω))

    with F Dawson's integral.  For other s a generic dispersion-integral
    fallback is used (PV quadrature); Im B = -π η_s ω^s e^{-ω} < 0 always.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float)) / spec.omega_c
    if np.any(w <= 0):
        raise ValueError("inversion_denominator requires omega > 0")
    w0 = omega0 / spec.omega_c
    es = spec.eta_s

    if spec.s == 3.0:
        ei = _sp.expi(w)
        out = (w0 - 2 * es) - (1 + es) * w - es * w**2 \
            - es * w**3 * np.exp(-w) * (-ei + 1j * np.pi)
    elif spec.s == 1.0:
        ei = _sp.expi(w)
        out = (w0 - es) - w * (1 + es * np.exp(-w) * (-ei + 1j * np.pi))
    elif spec.s == 0.5:
        rw = np.sqrt(w)
        out = (w0 - np.sqrt(np.pi) * es) - w \
            - 1j * np.pi * es * rw * (np.exp(-w) + 1j * (2 / np.sqrt(np.pi)) * _sp.dawsn(rw))
    elif allow_generic:
        out = _denominator_generic(spec, w0, w)
    else:
        raise ValueError(
            f"no hand-derived inversion denominator for s={spec.s} "
            "and the generic fallback is disabled"
        )
    return complex(out[0]) if np.ndim(omega) == 0 else out


def imaginary_axis_denominator(spec: BathSpec, omega0: float, y):
    """Denominator of û on the positive imaginary axis, z = i y ω_c, y > 0.

    There D(iy) = i B_loc(y) with the purely real

        B_loc(y) = ω0τc + y - η_s ∫_0^∞ x^s e^{-x}/(x+y) dx,

    so poles of û(z) are real zeros of B_loc.  Closed forms:

        s = 3  : integral = 2 - y + y² - y³ e^{y} E1(y)
        s = 1  : integral = 1 - y e^{y} E1(y)
        s = 1/2: integral = √π - π √y erfcx(√y)

    B_loc is strictly increasing (slope ≥ 1), so at most one zero exists;
    it does iff ω0τc < η_s Γ(s).
    """
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(yy <= 0):
        raise ValueError("imaginary_axis_denominator requires y > 0")
    w0 = omega0 / spec.omega_c
    es = spec.eta_s

    if spec.s == 3.0:
        integral = 2.0 - yy + yy**2 - yy**3 * np.exp(yy) * _sp.exp1(yy)
    elif spec.s == 1.0:
        integral = 1.0 - yy * np.exp(yy) * _sp.exp1(yy)
    elif spec.s == 0.5:
        ry = np.sqrt(yy)
        integral = np.sqrt(np.pi) - np.pi * ry * _sp.erfcx(ry)
    else:
        integral = np.array([
            quad(lambda x, yi=yi: x**spec.s * np.exp(-x) / (x + yi), 0.0, np.inf, limit=400)[0]
            for yi in yy.ravel()
        ]).reshape(yy.shape)
    out = w0 + yy - es * integral
    return float(out[0]) if np.ndim(y) == 0 else out


def imaginary_axis_denominator_derivative(spec: BathSpec, y: float) -> float:
    """d B_loc/dy = 1 + η_s ∫_0^∞ x^s e^{-x}/(x+y)² dx (exact quadrature)."""
    if y <= 0:
        raise ValueError("requires y > 0")
    integral, _ = quad(lambda x: x**spec.s * np.exp(-x) / (x + y) ** 2, 0.0, np.inf, limit=400)
    return 1.0 + spec.eta_s * integral
