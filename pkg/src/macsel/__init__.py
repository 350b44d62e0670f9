"""macsel: decision support for selecting WSN MAC protocol categories.

Analytical energy and delay models for three behavioural MAC categories,
a combined performance function to rank them, a requirement-driven protocol
selector, and a discrete-event simulator that validates the models.
"""

from .context import (
    CapParams,
    DerivedGeometry,
    NetworkContext,
    PspParams,
    ScheduledParams,
    derive_geometry,
    validate,
)
from .cpf import (
    CATEGORIES,
    CategoryEvaluation,
    CriterionValue,
    SweepRow,
    Weights,
    cpf_energy_delay,
    cpf_general,
    evaluate_all,
    rank_evaluations,
    sweep,
)
from .delay import DelayEstimate, cap_delay, psp_delay, scheduled_delay
from .energy import (
    CollisionSolution,
    EnergyBreakdown,
    cap_energy,
    csma_collision_probability,
    expected_attempts_csma,
    expected_attempts_psa,
    psa_offered_load,
    psp_energy,
    scheduled_energy,
)
from .errors import (
    ConfigError,
    DegenerateCPFError,
    MacselError,
    RegistryError,
    SaturatedError,
    ScheduleError,
    SelectionError,
)
from .radio import RadioProfile, rx_energy_per_bit, tx_energy_per_bit

__version__ = "0.1.0"
