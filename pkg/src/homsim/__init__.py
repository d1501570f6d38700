"""Deterministic coherence-optics simulator of Hong-Ou-Mandel anticorrelation."""

__version__ = "0.1.0"

from .correlation import (
    CorrelationResult,
    TauGrid,
    classical_baseline,
    coincidence_integrand,
    dephasing_sweep,
    evaluate,
)
from .optics import (
    FieldPair,
    OutputFields,
    beam_split,
    closed_form_intensities,
    phase_element,
    port_intensities,
)
from .sources import (
    ClassicalSource,
    PhaseSample,
    SpdcSource,
    ZetaModel,
    classical_phase,
    sample_ensemble,
    spdc_phase,
)
from .spectral import (
    DetuningGrid,
    EmptyGridError,
    Envelope,
    SpectralProfile,
    build_grid,
    envelope_value,
    filter_grid,
    gaussian_density,
)

__all__ = [
    "__version__",
    "CorrelationResult",
    "TauGrid",
    "classical_baseline",
    "coincidence_integrand",
    "dephasing_sweep",
    "evaluate",
    "FieldPair",
    "OutputFields",
    "beam_split",
    "closed_form_intensities",
    "phase_element",
    "port_intensities",
    "ClassicalSource",
    "PhaseSample",
    "SpdcSource",
    "ZetaModel",
    "classical_phase",
    "sample_ensemble",
    "spdc_phase",
    "DetuningGrid",
    "EmptyGridError",
    "Envelope",
    "SpectralProfile",
    "build_grid",
    "envelope_value",
    "filter_grid",
    "gaussian_density",
]
