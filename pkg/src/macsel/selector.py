"""Requirement-driven protocol selection.

Filter categories to those with at least one protocol satisfying every
requested requirement, rank the survivors by CPF, and return the satisfying
protocols of the best category.
"""

from __future__ import annotations

from dataclasses import dataclass

from .context import NetworkContext
from .cpf import CategoryEvaluation, Weights, evaluate_category, rank_evaluations
from .errors import SelectionError
from .radio import RadioProfile
from .registry import Registry

# Categories with a built-in performance model; new categories need one
# registered before they can be ranked.
_MODELLED = {"ScP", "CAP", "PSP"}


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a selection run.

    feasible_categories  requirement-satisfying categories, CPF descending
    best_category        the top-ranked category
    protocols            satisfying protocols of the best category (sorted)
    evaluations          per-category evaluations over the feasible set
    warnings             non-fatal notes (skipped categories, ties)
    """

    feasible_categories: tuple[str, ...]
    best_category: str
    protocols: tuple[str, ...]
    evaluations: tuple[CategoryEvaluation, ...]
    warnings: tuple[str, ...] = ()


def satisfying_protocols(reg: Registry, category: str, req: set[str]) -> list[str]:
    return sorted(
        p.name for p in reg.protocols_in(category) if req <= p.satisfies
    )


def satisfying_categories(reg: Registry, req: set[str]) -> set[str]:
    """Categories with at least one protocol satisfying every id in ``req``.

    An empty requirement set admits all categories.  Unknown requirement ids
    raise, naming the offender.
    """
    unknown = set(req) - reg.requirement_ids()
    if unknown:
        raise SelectionError(
            f"unknown requirement id(s): {', '.join(sorted(unknown))}"
        )
    if not req:
        return set(reg.category_ids())
    return {
        c for c in reg.category_ids() if satisfying_protocols(reg, c, set(req))
    }


def select(
    reg: Registry,
    ctx: NetworkContext,
    prof: RadioProfile,
    req: set[str],
    w: Weights,
) -> SelectionResult:
    """Run the selection framework for one context.

    Raises :class:`SelectionError` when no category satisfies the
    requirements or every feasible category failed to evaluate.
    """
    feasible = satisfying_categories(reg, req)
    if not feasible:
        raise SelectionError("no satisfying category for the given requirements")

    warnings: list[str] = []
    evals: list[CategoryEvaluation] = []
    for cat in sorted(feasible, key=_category_order(reg)):
        if cat not in _MODELLED:
            warnings.append(f"category {cat!r} skipped: no performance model")
            continue
        ev = evaluate_category(cat, ctx, prof, w)
        if ev.error is not None:
            warnings.append(f"category {cat!r} excluded: {ev.error}")
        evals.append(ev)

    ranked, ties = rank_evaluations(evals)
    if not ranked:
        raise SelectionError("no evaluable category among the satisfying ones")
    for a, b in ties:
        warnings.append(f"tie between {a} and {b}; fixed category order applied")

    best = ranked[0].category
    return SelectionResult(
        feasible_categories=tuple(e.category for e in ranked),
        best_category=best,
        protocols=tuple(satisfying_protocols(reg, best, set(req))),
        evaluations=tuple(evals),
        warnings=tuple(warnings),
    )


def _category_order(reg: Registry):
    order = {c: i for i, c in enumerate(reg.category_ids())}
    return lambda cat: order.get(cat, len(order))
