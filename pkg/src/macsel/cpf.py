"""Combined performance function: the weighted numerator/denominator combiner,
its energy-delay specialisation 1/(alpha*E + beta*T), and parameter sweeps.

Criteria with a direct effect on performance go to the numerator, criteria
with an inverse effect to the denominator, each weighted by importance*cost.
The energy-delay case has no direct criterion; the constant 1 is the unique
numerator making both forms agree.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .context import NetworkContext, validate
from .delay import DelayEstimate, cap_delay, psp_delay, scheduled_delay
from .energy import EnergyBreakdown, cap_energy, psp_energy, scheduled_energy
from .errors import DegenerateCPFError, MacselError
from .numfmt import sig6
from .radio import RadioProfile

CATEGORIES = ("ScP", "CAP", "PSP")

# Model/delay evaluators per built-in category.
_EVALUATORS = {
    "ScP": (scheduled_energy, scheduled_delay),
    "CAP": (cap_energy, cap_delay),
    "PSP": (psp_energy, psp_delay),
}


@dataclass(frozen=True)
class CriterionValue:
    """A measured criterion with its weighting.

    direction "direct" places the weighted value in the numerator,
    "inverse" in the denominator.
    """

    id: str
    value: float
    importance: float = 1.0
    cost: float = 1.0
    direction: str = "inverse"


@dataclass(frozen=True)
class Weights:
    """Energy/delay coefficients: alpha = rho_E*kappa_E, beta = rho_T*kappa_T.

    Both are raw multipliers that also absorb the unit reconciliation
    between watts and seconds.
    """

    alpha: float = 10.0 / 11.0
    beta: float = 1.0 / 11.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
            raise ValueError("weights must be nonnegative with alpha + beta > 0")


@dataclass(frozen=True)
class CategoryEvaluation:
    """Per-category outcome; ``error`` is set instead of ``cpf`` when the
    category's model could not be evaluated (e.g. a saturated collision
    solver)."""

    category: str
    energy: EnergyBreakdown | None
    delay: DelayEstimate | None
    cpf: float | None
    error: str | None = None


def cpf_general(criteria: list[CriterionValue]) -> float:
    """sum(direct rho*kappa*value) / sum(inverse rho*kappa*value).

    Raises :class:`DegenerateCPFError` when the denominator is zero.
    """
    num = sum(c.importance * c.cost * c.value for c in criteria if c.direction == "direct")
    den = sum(c.importance * c.cost * c.value for c in criteria if c.direction == "inverse")
    if den <= 0.0:
        raise DegenerateCPFError("degenerate CPF: denominator sum is not positive")
    return num / den


def cpf_energy_delay(energy: float, delay: float, w: Weights) -> float:
    """1 / (alpha*E + beta*T)."""
    den = w.alpha * energy + w.beta * delay
    if den <= 0.0:
        raise DegenerateCPFError("degenerate CPF: alpha*E + beta*T is not positive")
    return 1.0 / den


def evaluate_category(
    category: str, ctx: NetworkContext, prof: RadioProfile, w: Weights
) -> CategoryEvaluation:
    if category not in _EVALUATORS:
        return CategoryEvaluation(category, None, None, None,
                                  error="no performance model")
    energy_fn, delay_fn = _EVALUATORS[category]
    try:
        energy = energy_fn(ctx, prof)
        delay = delay_fn(ctx)
        cpf = cpf_energy_delay(energy.total, delay.seconds, w)
    except MacselError as exc:
        return CategoryEvaluation(category, None, None, None, error=str(exc))
    except OverflowError:
        return CategoryEvaluation(category, None, None, None,
                                  error="model overflow: load outside validity region")
    return CategoryEvaluation(category, energy, delay, cpf)


def evaluate_all(
    ctx: NetworkContext, prof: RadioProfile, w: Weights
) -> list[CategoryEvaluation]:
    """One evaluation per built-in category, in fixed category order.

    A category whose model errors is reported with an error marker and no
    CPF; callers exclude it from ranking.
    """
    violations = validate(ctx)
    if violations:
        raise ValueError("invalid context: " + "; ".join(violations))
    return [evaluate_category(cat, ctx, prof, w) for cat in CATEGORIES]


def rank_evaluations(
    evals: list[CategoryEvaluation],
) -> tuple[list[CategoryEvaluation], list[tuple[str, str]]]:
    """Valid evaluations sorted by CPF descending, plus any exact ties.

    Ties are broken by the fixed category order ScP < CAP < PSP and reported
    as (category, category) pairs so callers can flag them.
    """
    order = {cat: i for i, cat in enumerate(CATEGORIES)}
    valid = [e for e in evals if e.error is None]
    ranked = sorted(valid, key=lambda e: (-e.cpf, order.get(e.category, len(order))))
    ties = [
        (a.category, b.category)
        for a, b in zip(ranked, ranked[1:])
        if a.cpf == b.cpf
    ]
    return ranked, ties


SWEEP_AXES = ("pkt_rate", "n_nodes", "network_radius")

SWEEP_HEADER = (
    "axis,category,collision,overhearing,idle,overhead,total_energy,delay,cpf"
)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    category: str
    energy: EnergyBreakdown | None
    delay: float | None
    cpf: float | None
    error: str | None = None

    def as_csv(self) -> str:
        if self.error is not None:
            return f"{sig6(self.axis_value)},{self.category},,,,,,,error: {self.error}"
        e = self.energy
        values = (self.axis_value, e.collision, e.overhearing, e.idle_listening,
                  e.overhead, e.total, self.delay, self.cpf)
        head, *rest = (sig6(v) for v in values)
        return ",".join([head, self.category] + rest)


def sweep(
    ctx: NetworkContext,
    prof: RadioProfile,
    w: Weights,
    axis: str,
    values: list[float],
) -> list[SweepRow]:
    """Evaluate every category at each axis value; rows in input order.

    An axis value producing an invalid context yields one violation-marked
    row per category instead of failing the whole sweep.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not values:
        raise ValueError("values must be nonempty")
    rows: list[SweepRow] = []
    for value in values:
        sub = value
        if axis == "n_nodes":
            sub = int(round(value))
        candidate = replace(ctx, **{axis: sub})
        violations = validate(candidate)
        if violations:
            for cat in CATEGORIES:
                rows.append(SweepRow(value, cat, None, None, None,
                                     error="; ".join(violations)))
            continue
        for ev in evaluate_all(candidate, prof, w):
            if ev.error is not None:
                rows.append(SweepRow(value, ev.category, None, None, None,
                                     error=ev.error))
            else:
                rows.append(SweepRow(value, ev.category, ev.energy,
                                     ev.delay.seconds, ev.cpf))
    return rows
