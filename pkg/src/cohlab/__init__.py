"""Exact non-Markovian dynamics of optical coherent-state qubits.

A single harmonic-oscillator bath damps each mode; the propagator u(t)
solves a memory-kernel equation of motion and is computed both by direct
time stepping and by Laplace inversion (pole + branch cut).  From u the
package derives the exact two-qubit channel state, its concurrence, fully
entangled fraction and teleportation fidelity, and the effect of
phase-flip error correction versus bit-flip repetition encoding.
"""

__version__ = "0.1.0"

from .bath import BathSpec, correlation, inversion_denominator, spectral_density
from .channel import (
    ChannelMetrics,
    TwoQubitState,
    cluster_state_density,
    concurrence_closed,
    fef_closed,
    fef_oracle,
    metrics_closed,
    teleportation_fidelity,
    wootters_concurrence,
)
from .codes import (
    CodeConfig,
    bitflip_density,
    bitflip_metrics,
    bitflip_p_e,
    corrected_c,
    corrected_channel_metrics,
    phase_success_prob,
)
from .propagator import (
    PropagatorSolution,
    TimeGrid,
    find_poles,
    lamb_shift,
    markov_u,
    solve_laplace,
    solve_volterra,
)
from .qubit import (
    CatState,
    CoherentElement,
    coherence_factor,
    evolve_cat,
    evolve_element,
    phase_error_prob,
)

__all__ = [
    "__version__",
    "BathSpec", "spectral_density", "correlation", "inversion_denominator",
    "TimeGrid", "PropagatorSolution", "solve_volterra", "solve_laplace",
    "find_poles", "lamb_shift", "markov_u",
    "CoherentElement", "CatState", "evolve_element", "evolve_cat",
    "coherence_factor", "phase_error_prob",
    "TwoQubitState", "ChannelMetrics", "cluster_state_density",
    "concurrence_closed", "wootters_concurrence", "fef_closed", "fef_oracle",
    "teleportation_fidelity", "metrics_closed",
    "CodeConfig", "phase_success_prob", "corrected_c",
    "corrected_channel_metrics", "bitflip_p_e", "bitflip_density", "bitflip_metrics",
]
