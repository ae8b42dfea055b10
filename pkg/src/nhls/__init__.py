"""Wave-packet dynamics on 1D lattices with embedded gain/loss SSH segments.

Library layout: :mod:`nhls.lattice` builds Hamiltonians from segment
lists, :mod:`nhls.analytic` holds the closed-form results (dispersion,
interface scattering, ring modes, band overlap), :mod:`nhls.dynamics`
prepares packets and propagates them, :mod:`nhls.observables` reduces the
runs to scalar diagnostics, and :mod:`nhls.experiments` packages the named
reproduction scenarios behind the ``nhls`` command line.
"""

__version__ = "0.1.0"

from .params import ModelParams, ep_gamma
from .lattice import (
    Boundary,
    Hamiltonian,
    LatticeSpec,
    SegmentDescriptor,
    SegmentKind,
    assemble,
    build_nh_ssh_segment,
    build_uniform_chain,
    junction_spec,
    lead,
    ring_spec,
    sandwich_spec,
    ssh_segment,
)
from .state import StateVector, dirac_norm
from .analytic import (
    OverlapCurve,
    RingMode,
    ScatteringSolution,
    band_overlap,
    dirac_probability,
    dispersion,
    overlap_curve,
    ring_modes,
    scattering_solve,
    semi_infinite_zero_mode,
    zero_energy_interface_state,
)
from .dynamics import (
    EvolutionRecord,
    Method,
    PropagatorConfig,
    gaussian_packet,
    propagate,
    quasi_coalescing_packets,
)
from .observables import (
    RegionWindow,
    ScatterReport,
    absorption_metric,
    confinement_trace,
    ipr,
    region_probability,
    scatter_report,
    spectrum_reality,
)

__all__ = [
    "ModelParams", "ep_gamma",
    "Boundary", "Hamiltonian", "LatticeSpec", "SegmentDescriptor", "SegmentKind",
    "assemble", "build_nh_ssh_segment", "build_uniform_chain",
    "junction_spec", "lead", "ring_spec", "sandwich_spec", "ssh_segment",
    "StateVector", "dirac_norm",
    "OverlapCurve", "RingMode", "ScatteringSolution",
    "band_overlap", "dirac_probability", "dispersion", "overlap_curve",
    "ring_modes", "scattering_solve", "semi_infinite_zero_mode",
    "zero_energy_interface_state",
    "EvolutionRecord", "Method", "PropagatorConfig",
    "gaussian_packet", "propagate", "quasi_coalescing_packets",
    "RegionWindow", "ScatterReport", "absorption_metric", "confinement_trace",
    "ipr", "region_probability", "scatter_report", "spectrum_reality",
]
