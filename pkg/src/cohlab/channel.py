"""Two-qubit noisy channel built from a cluster-type entangled coherent state.

Each mode is damped independently by the exact element map, and the state
is expressed in the orthonormal even/odd product basis, where it takes an
X-form.  Channel quality is tracked by the concurrence, the fully
entangled fraction f_max, and the teleportation fidelity F = (2 f_max+1)/3.
Closed forms for all three exist; independent matrix-level oracles
(Wootters spin-flip spectrum, magic-basis eigenvalue, direct search over
maximally entangled states) are kept alongside and never collapsed into
the closed-form route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubit import coherence_factor, evenodd_coeffs

__all__ = [
    "EvenOddCoeffs",
    "TwoQubitState",
    "ChannelMetrics",
    "cluster_state_density",
    "element_map_density",
    "concurrence_closed",
    "wootters_concurrence",
    "fef_closed",
    "fef_oracle",
    "fef_direct_search",
    "teleportation_fidelity",
    "metrics_closed",
]


@dataclass(frozen=True)
class EvenOddCoeffs:
    """Expansion coefficients of |±α_t⟩ over the even/odd basis: a ≥ b ≥ 0."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= self.b >= 0.0):
            raise ValueError("need a >= b >= 0")
        if abs(self.a**2 + self.b**2 - 1.0) > 1e-14:
            raise ValueError("a^2 + b^2 must be 1")

    @classmethod
    def from_alpha_t(cls, alpha_t: complex) -> "EvenOddCoeffs":
        a, b = evenodd_coeffs(alpha_t)
        return cls(a, b)


@dataclass
class TwoQubitState:
    """4×4 density matrix in the basis {|ee⟩, |eo⟩, |oe⟩, |oo⟩}.

    params records (alpha0, u, c, n_bits) that generated the state.
    """

    rho: np.ndarray
    params: tuple = ()

    def validate(self, trace_tol: float = 1e-10, herm_tol: float = 1e-12,
                 psd_tol: float = 1e-10) -> None:
        r = self.rho
        if r.shape != (4, 4):
            raise AssertionError("density matrix must be 4x4")
        if abs(np.trace(r) - 1.0) > trace_tol:
            raise AssertionError(f"trace deviates from 1 by {abs(np.trace(r)-1.0):.3e}")
        if np.max(np.abs(r - r.conj().T)) > herm_tol:
            raise AssertionError("density matrix is not Hermitian")
        ev = np.linalg.eigvalsh(0.5 * (r + r.conj().T))
        if ev.min() < -psd_tol:
            raise AssertionError(f"negative eigenvalue {ev.min():.3e}")


@dataclass(frozen=True)
class ChannelMetrics:
    """Concurrence, fully entangled fraction, and teleportation fidelity."""

    concurrence: float
    f_max: float
    fidelity: float

    def __post_init__(self):
        if not -1e-12 <= self.concurrence <= 1.0 + 1e-12:
            raise ValueError(f"concurrence {self.concurrence} outside [0, 1]")
        if not 1.0 / 3.0 - 1e-12 <= self.fidelity <= 1.0 + 1e-12:
            raise ValueError(f"fidelity {self.fidelity} outside [1/3, 1]")


def cluster_state_density(alpha0: complex, u: complex) -> TwoQubitState:
    """Exact evolved density matrix of the cluster-type state (closed X-form).

    With a, b from α_t = α_0 u, c the coherence factor and
    M = 4(1 + e^{-4|α_0|²}):

        ρ = (4/M) [[a⁴(1+c²), 0, 0, 2ic a²b²],
                   [0, a²b²(1-c²), 0, 0],
                   [0, 0, a²b²(1-c²), 0],
                   [-2ic a²b², 0, 0, b⁴(1+c²)]]
    """
    a, b = evenodd_coeffs(alpha0 * u)
    c = coherence_factor(alpha0, u)
    m = 4.0 * (1.0 + math.exp(-4.0 * abs(alpha0) ** 2))
    a2b2 = a * a * b * b
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = a**4 * (1 + c * c)
    rho[1, 1] = a2b2 * (1 - c * c)
    rho[2, 2] = a2b2 * (1 - c * c)
    rho[3, 3] = b**4 * (1 + c * c)
    rho[0, 3] = 2j * c * a2b2
    rho[3, 0] = -2j * c * a2b2
    return TwoQubitState(rho * (4.0 / m), (alpha0, u, c, 1))


def element_map_density(alpha0: complex, u: complex, n: int = 1) -> TwoQubitState:
    """Dual construction: evolve all 16 elements of the (n-fold encoded)
    cluster state through the tensor-product element map and express the
    result in the even/odd basis.

    Independent of the closed-form matrices; used to gate them.  The
    encoded initial state carries amplitudes (1, -z^n, -z^n, -z^{2n}) with
    z = -i, each n-mode block damps by c^n when ket and bra signs differ,
    and |±α_t⟩^{⊗n} = a_n|e_n⟩ ± b_n|o_n⟩.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    z = -1j
    amps = {(1, 1): 1.0 + 0j, (1, -1): -(z**n), (-1, 1): -(z**n), (-1, -1): -(z ** (2 * n))}
    a_n, b_n = evenodd_coeffs(math.sqrt(n) * alpha0 * u)
    vec = {1: np.array([a_n, b_n]), -1: np.array([a_n, -b_n])}
    c = coherence_factor(alpha0, u)
    if n % 2 == 0:
        m_n = 4.0
    else:
        m_n = 4.0 * (1.0 + math.exp(-4.0 * n * abs(alpha0) ** 2))
    rho = np.zeros((4, 4), dtype=complex)
    signs = (1, -1)
    for s1 in signs:
        for s2 in signs:
            for r1 in signs:
                for r2 in signs:
                    coeff = amps[(s1, s2)] * np.conj(amps[(r1, r2)])
                    damp = c ** (n * ((s1 != r1) + (s2 != r2)))
                    ket = np.kron(vec[s1], vec[s2])
                    bra = np.kron(vec[r1], vec[r2])
                    rho += coeff * damp * np.outer(ket, bra)
    return TwoQubitState(rho / m_n, (alpha0, u, c, n))


def concurrence_closed(alpha0: complex, u: complex) -> float:
    """C = 2a²b²/(1+e^{-4|α_0|²}) · max{0, c² + 2c - 1}.

    Vanishes (entanglement sudden death) once c drops below √2 - 1.
    """
    a, b = evenodd_coeffs(alpha0 * u)
    c = coherence_factor(alpha0, u)
    pref = 2.0 * (a * b) ** 2 / (1.0 + math.exp(-4.0 * abs(alpha0) ** 2))
    return pref * max(0.0, c * c + 2.0 * c - 1.0)


_YY = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)  # (Y ⊗ Y) in the even/odd product basis


def wootters_concurrence(state: TwoQubitState) -> float:
    """max{0, √λ1 - √λ2 - √λ3 - √λ4} from the spin-flip spectrum.

    λ_i are the (descending) eigenvalues of ρ (Y⊗Y) ρ* (Y⊗Y).  With
    ρ = W W† the √λ_i equal the singular values of the complex symmetric
    Wᵀ (Y⊗Y) W, which an SVD delivers without the √(tiny eigenvalue)
    precision loss of the plain non-Hermitian eigensolve near pure states.
    Roundoff negatives of ρ above -1e-12 are clamped; worse is an error.
    """
    rho = 0.5 * (state.rho + state.rho.conj().T)
    lam, vec = np.linalg.eigh(rho)
    if lam.min() < -1e-12:
        raise ArithmeticError(f"density matrix has eigenvalue {lam.min():.3e} < -1e-12")
    w = vec * np.sqrt(np.clip(lam, 0.0, None))
    sigma = np.linalg.svd(w.T @ _YY @ w, compute_uv=False)
    return max(0.0, sigma[0] - sigma[1] - sigma[2] - sigma[3])


def fef_closed(alpha0: complex, u: complex) -> float:
    """f_max = (c² - 2a²b²(1-c)² + 1) / (2(1 + e^{-4|α_0|²}))."""
    a, b = evenodd_coeffs(alpha0 * u)
    c = coherence_factor(alpha0, u)
    return (c * c - 2.0 * (a * b) ** 2 * (1.0 - c) ** 2 + 1.0) \
        / (2.0 * (1.0 + math.exp(-4.0 * abs(alpha0) ** 2)))


_SQ2 = 1.0 / math.sqrt(2.0)
# magic basis {Φ+, iΦ-, iΨ+, Ψ-} as columns, in the even/odd product basis
_MAGIC = np.array([
    [_SQ2, 1j * _SQ2, 0, 0],
    [0, 0, 1j * _SQ2, _SQ2],
    [0, 0, 1j * _SQ2, -_SQ2],
    [_SQ2, -1j * _SQ2, 0, 0],
], dtype=complex)


def fef_oracle(state: TwoQubitState) -> float:
    """Fully entangled fraction as the largest eigenvalue of Re(ρ) in the
    magic basis (Bell states with phases i on Φ- and Ψ+)."""
    m = _MAGIC.conj().T @ state.rho @ _MAGIC
    real = 0.5 * (m + m.conj().T).real
    return float(np.linalg.eigvalsh(real)[-1])


def _haar_unitaries(rng: np.random.Generator, size: int) -> np.ndarray:
    g = rng.normal(size=(size, 2, 2)) + 1j * rng.normal(size=(size, 2, 2))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _best_overlap(rho: np.ndarray, u1: np.ndarray, u2: np.ndarray):
    # (U1 ⊗ U2)|Φ+⟩ as the 2x2 amplitude matrix U1 U2^T / √2
    psi = np.einsum("bij,bkj->bik", u1, u2) * _SQ2
    flat = psi.reshape(len(psi), 4)
    vals = np.einsum("bi,ij,bj->b", flat.conj(), rho, flat).real
    k = int(np.argmax(vals))
    return float(vals[k]), k


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _rotate(base: np.ndarray, x: np.ndarray) -> np.ndarray:
    theta = float(np.linalg.norm(x))
    if theta == 0.0:
        return base
    n = x / theta
    h = n[0] * _PAULI[0] + n[1] * _PAULI[1] + n[2] * _PAULI[2]
    return base @ (np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * h)


def fef_direct_search(state: TwoQubitState, n_samples: int = 10000,
                      seed: int = 0) -> float:
    """Brute-force f_max: maximize ⟨ψ|ρ|ψ⟩ over maximally entangled states
    |ψ⟩ = (U1 ⊗ U2)|Φ+⟩ — Haar sampling followed by derivative-free local
    ascent on the (U1, U2) group chart.

    Phase-convention independent and never touches the magic basis, so it
    certifies fef_oracle rather than re-deriving it.  As a function of the
    state, the overlap has a unique local maximum over this manifold, so the
    polish converges globally from the sampled incumbent.
    """
    from scipy.optimize import minimize

    rng = np.random.default_rng(seed)
    rho = state.rho
    u1 = _haar_unitaries(rng, n_samples)
    u2 = _haar_unitaries(rng, n_samples)
    best, k = _best_overlap(rho, u1, u2)
    b1, b2 = u1[k], u2[k]

    def negative(x):
        v1 = _rotate(b1, x[:3])
        v2 = _rotate(b2, x[3:])
        psi = (v1 @ v2.T).ravel() * _SQ2
        return -float(np.real(psi.conj() @ rho @ psi))

    res = minimize(negative, np.zeros(6), method="Nelder-Mead",
                   options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 4000})
    return max(best, -float(res.fun))


def teleportation_fidelity(f_max: float) -> float:
    """F = (2 f_max + 1)/3; the classical limit is F = 2/3 at f_max = 1/2."""
    if not 0.0 <= f_max <= 1.0:
        raise ValueError(f"f_max = {f_max} outside [0, 1]")
    return (2.0 * f_max + 1.0) / 3.0


def metrics_closed(alpha0: complex, u: complex) -> ChannelMetrics:
    """Closed-form metrics of the unencoded channel at one instant."""
    f = fef_closed(alpha0, u)
    return ChannelMetrics(concurrence_closed(alpha0, u), f, teleportation_fidelity(f))
