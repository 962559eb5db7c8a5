"""Rotational cooling of diatomic impurities immersed in a condensate.

Transition rates for phonon-induced rotational relaxation, and the
population kinetics they drive, in condensate units (hbar = c = xi = 1,
k_B = 1).
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .condensate import (PhononMode, dispersion, dk_domega,
                         inverse_dispersion, occupation_at_temperature,
                         thermal_occupation, w_cross, w_factor, w_prec)
from .errors import (DegenerateTransition, DomainError, InvalidParams,
                     NonUniqueSteadyState, QuadratureFailure, RotocoolError,
                     StiffnessFailure)
from .kinetics import (Generator, PopulationVector, TrajectoryDiagnostics,
                       assemble_generator, diagnostics, evolve, steady_state,
                       truncation_leak)
from .params import (ZETA_3_2, DerivedConstants, SystemParams, critical_j,
                     derive_constants, thermal_angular_momentum)
from .rates_single import (CHANNELS, ChannelRateMatrix, RatePair,
                           RotorSpectrum, channel_rate_matrix,
                           effective_gamma, effective_gamma_from_coupling,
                           rate_1ph_m_resolved, rate_1ph_small_molecule,
                           rate_1ph_total, transition_energy)
from .rates_two import (EtaQuadrature, angular_weight_matrix, kernel_cross,
                        kernel_cross_from_coupling, kernel_prec,
                        kernel_prec_from_coupling, rate_2ph_cross,
                        rate_2ph_prec, thermal_2ph_ratio)
from .special_fn import (CGTable, clebsch_gordan, g_coefficient,
                         spherical_bessel)

__all__ = [
    "BACKEND", "CGTable", "CHANNELS", "ChannelRateMatrix",
    "DegenerateTransition", "DerivedConstants", "DomainError",
    "EtaQuadrature", "Generator", "InvalidParams", "NonUniqueSteadyState",
    "PhononMode", "PopulationVector", "QuadratureFailure", "RatePair",
    "RotocoolError", "RotorSpectrum", "StiffnessFailure", "SystemParams",
    "TrajectoryDiagnostics", "ZETA_3_2", "angular_weight_matrix",
    "assemble_generator", "channel_rate_matrix", "clebsch_gordan",
    "critical_j", "derive_constants", "diagnostics", "dispersion",
    "dk_domega", "effective_gamma", "effective_gamma_from_coupling",
    "evolve", "g_coefficient", "inverse_dispersion", "kernel_cross",
    "kernel_cross_from_coupling", "kernel_prec", "kernel_prec_from_coupling",
    "occupation_at_temperature", "rate_1ph_m_resolved",
    "rate_1ph_small_molecule", "rate_1ph_total", "rate_2ph_cross",
    "rate_2ph_prec", "spherical_bessel", "steady_state", "thermal_2ph_ratio",
    "thermal_angular_momentum", "thermal_occupation", "transition_energy",
    "truncation_leak", "w_cross", "w_factor", "w_prec",
]
