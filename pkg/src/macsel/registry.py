"""Protocol registry: categories, protocols and the requirement vocabulary,
with copy-on-update expansion operations and JSON persistence.

The seed registry reconstructs only the protocols the selection examples
name (a partial reconstruction of the source comparison table); the schema
is open-vocabulary so a fuller table can be loaded later.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import RegistryError


@dataclass(frozen=True)
class Requirement:
    id: str
    description: str = ""


@dataclass(frozen=True)
class Category:
    id: str
    representative: str = ""
    note: str = ""


@dataclass(frozen=True)
class ProtocolRecord:
    """A protocol, its category, and its requirement review state.

    ``satisfies`` must be a subset of ``reviewed_against``: a protocol only
    counts as satisfying a requirement it has actually been checked against.
    """

    name: str
    category: str
    satisfies: frozenset[str] = frozenset()
    reviewed_against: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "satisfies", frozenset(self.satisfies))
        object.__setattr__(self, "reviewed_against", frozenset(self.reviewed_against))


@dataclass(frozen=True)
class Registry:
    categories: tuple[Category, ...] = ()
    requirements: tuple[Requirement, ...] = ()
    protocols: tuple[ProtocolRecord, ...] = ()

    def category_ids(self) -> list[str]:
        return [c.id for c in self.categories]

    def requirement_ids(self) -> set[str]:
        return {r.id for r in self.requirements}

    def protocols_in(self, category: str) -> list[ProtocolRecord]:
        return [p for p in self.protocols if p.category == category]


def check_registry(reg: Registry) -> list[str]:
    """Structural violations: duplicate ids, dangling references,
    satisfies outside reviewed_against."""
    v: list[str] = []
    cat_ids = reg.category_ids()
    if len(cat_ids) != len(set(cat_ids)):
        v.append("categories: duplicate id")
    req_ids = [r.id for r in reg.requirements]
    if len(req_ids) != len(set(req_ids)):
        v.append("requirements: duplicate id")
    names = [p.name for p in reg.protocols]
    if len(names) != len(set(names)):
        v.append("protocols: duplicate name")
    req_set = set(req_ids)
    cat_set = set(cat_ids)
    for p in reg.protocols:
        if p.category not in cat_set:
            v.append(f"protocols.{p.name}.category: unknown category {p.category!r}")
        for rid in sorted(p.satisfies | p.reviewed_against):
            if rid not in req_set:
                v.append(f"protocols.{p.name}: unknown requirement {rid!r}")
        if not p.satisfies <= p.reviewed_against:
            extra = ", ".join(sorted(p.satisfies - p.reviewed_against))
            v.append(
                f"protocols.{p.name}.satisfies: {extra} not in reviewed_against"
            )
    return v


def add_protocol(reg: Registry, rec: ProtocolRecord) -> Registry:
    """Append a protocol; prior entries are untouched."""
    if rec.category not in reg.category_ids():
        raise RegistryError(f"unknown category {rec.category!r}; add_category first")
    if any(p.name == rec.name for p in reg.protocols):
        raise RegistryError(f"duplicate protocol name {rec.name!r}")
    unknown = (rec.satisfies | rec.reviewed_against) - reg.requirement_ids()
    if unknown:
        raise RegistryError(
            f"unknown requirement(s) {sorted(unknown)} for protocol {rec.name!r}"
        )
    if not rec.satisfies <= rec.reviewed_against:
        raise RegistryError(
            f"protocol {rec.name!r}: satisfies must be a subset of reviewed_against"
        )
    return replace(reg, protocols=reg.protocols + (rec,))


def add_category(reg: Registry, id: str, representative: str = "", note: str = "") -> Registry:
    """Add a category.  Selection over it reports "no performance model"
    until an evaluation function is registered for the id."""
    if id in reg.category_ids():
        raise RegistryError(f"duplicate category id {id!r}")
    return replace(reg, categories=reg.categories + (Category(id, representative, note),))


def add_requirement(
    reg: Registry, req: Requirement
) -> tuple[Registry, list[ProtocolRecord]]:
    """Add a requirement and return the review worklist.

    Every existing protocol must eventually be reviewed against the new
    requirement; the worklist orders protocols by the coverage heuristic:
    protocols covering the maximum number of distinct satisfied-requirement
    combinations come first, so reviewing the head of the list covers the
    most combinations soonest.  Until reviewed, selection treats the pair as
    "does not satisfy".
    """
    if req.id in reg.requirement_ids():
        raise RegistryError(f"duplicate requirement id {req.id!r}")
    updated = replace(reg, requirements=reg.requirements + (req,))
    return updated, review_worklist(reg)


def review_worklist(reg: Registry) -> list[ProtocolRecord]:
    """Greedy cover of satisfied-requirement combinations.

    A protocol satisfying set S covers every subset of S.  Protocols are
    emitted in greedy order of newly covered combinations (ties by name);
    protocols adding nothing new follow in name order.
    """
    remaining = sorted(reg.protocols, key=lambda p: p.name)
    covered: set[frozenset[str]] = set()
    ordered: list[ProtocolRecord] = []

    def combos(p: ProtocolRecord) -> set[frozenset[str]]:
        items = sorted(p.satisfies)
        out = set()
        for mask in range(1 << len(items)):
            out.add(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
        return out

    combo_cache = {p.name: combos(p) for p in remaining}
    while remaining:
        best = max(remaining, key=lambda p: (len(combo_cache[p.name] - covered),))
        gain = len(combo_cache[best.name] - covered)
        if gain == 0:
            ordered.extend(remaining)
            break
        ordered.append(best)
        covered |= combo_cache[best.name]
        remaining.remove(best)
    return ordered


def mark_reviewed(
    reg: Registry, protocol: str, requirement: str, satisfies: bool
) -> Registry:
    """Record the outcome of reviewing one (protocol, requirement) pair."""
    if requirement not in reg.requirement_ids():
        raise RegistryError(f"unknown requirement {requirement!r}")
    out = []
    found = False
    for p in reg.protocols:
        if p.name == protocol:
            found = True
            sat = p.satisfies | {requirement} if satisfies else p.satisfies - {requirement}
            p = replace(p, satisfies=sat,
                        reviewed_against=p.reviewed_against | {requirement})
        out.append(p)
    if not found:
        raise RegistryError(f"unknown protocol {protocol!r}")
    return replace(reg, protocols=tuple(out))


# ---------------------------------------------------------------------------
# Persistence

def save_registry(reg: Registry) -> dict:
    return {
        "categories": [
            {"id": c.id, "representative": c.representative, "note": c.note}
            for c in reg.categories
        ],
        "requirements": [
            {"id": r.id, "description": r.description} for r in reg.requirements
        ],
        "protocols": [
            {
                "name": p.name,
                "category": p.category,
                "satisfies": sorted(p.satisfies),
                "reviewed_against": sorted(p.reviewed_against),
            }
            for p in reg.protocols
        ],
    }


def _require_keys(doc: dict, allowed: set[str], where: str):
    unknown = set(doc) - allowed
    if unknown:
        raise RegistryError(
            "; ".join(f"{where}.{k}: unknown field" for k in sorted(unknown))
        )


def load_registry(doc: dict) -> Registry:
    """Parse and validate a registry document; load(save(reg)) == reg."""
    if not isinstance(doc, dict):
        raise RegistryError("registry: document must be a JSON object")
    _require_keys(doc, {"categories", "requirements", "protocols"}, "registry")
    cats = []
    for i, c in enumerate(doc.get("categories", [])):
        _require_keys(c, {"id", "representative", "note"}, f"categories[{i}]")
        if "id" not in c:
            raise RegistryError(f"categories[{i}].id: missing")
        cats.append(Category(c["id"], c.get("representative", ""), c.get("note", "")))
    reqs = []
    for i, r in enumerate(doc.get("requirements", [])):
        _require_keys(r, {"id", "description"}, f"requirements[{i}]")
        if "id" not in r:
            raise RegistryError(f"requirements[{i}].id: missing")
        reqs.append(Requirement(r["id"], r.get("description", "")))
    prots = []
    for i, p in enumerate(doc.get("protocols", [])):
        _require_keys(
            p, {"name", "category", "satisfies", "reviewed_against"}, f"protocols[{i}]"
        )
        for key in ("name", "category"):
            if key not in p:
                raise RegistryError(f"protocols[{i}].{key}: missing")
        prots.append(
            ProtocolRecord(
                p["name"],
                p["category"],
                frozenset(p.get("satisfies", [])),
                frozenset(p.get("reviewed_against", [])),
            )
        )
    reg = Registry(tuple(cats), tuple(reqs), tuple(prots))
    violations = check_registry(reg)
    if violations:
        raise RegistryError("; ".join(violations))
    return reg


def load_registry_file(path: str | Path) -> Registry:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RegistryError(f"{path}: invalid JSON ({exc})") from exc
    return load_registry(doc)


def save_registry_file(reg: Registry, path: str | Path) -> None:
    """Atomic write: serialize to a temp file, then rename into place."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(save_registry(reg), indent=2) + "\n")
    tmp.replace(path)


def seed_registry() -> Registry:
    """The shipped starting registry.

    Holds the three behavioural categories with their representative
    protocols, the two requirements the selection examples exercise, and the
    handful of protocols those examples name.  This is a partial
    reconstruction; extend it with the registry CLI as protocols get
    reviewed.
    """
    reqs = (
        Requirement("overhearing-avoidance",
                    "nodes do not decode traffic addressed to other nodes"),
        Requirement("distributed",
                    "operates without a central scheduler or topology authority"),
    )
    both = frozenset({"overhearing-avoidance", "distributed"})
    cats = (
        Category("ScP", "TSMP", "scheduled superframe (slot x frequency) protocols"),
        Category("CAP", "SMAC", "common active period protocols"),
        Category("PSP", "PSA", "preamble sampling / low-power listening protocols"),
    )
    prots = (
        ProtocolRecord("TSMP", "ScP",
                       satisfies=frozenset({"overhearing-avoidance"}),
                       reviewed_against=both),
        ProtocolRecord("SMACS", "ScP", satisfies=both, reviewed_against=both),
        ProtocolRecord("AS-MAC", "ScP", satisfies=both, reviewed_against=both),
        ProtocolRecord("SMAC", "CAP",
                       satisfies=frozenset({"distributed"}),
                       reviewed_against=both),
        ProtocolRecord("PSA", "PSP",
                       satisfies=frozenset({"distributed"}),
                       reviewed_against=both),
        ProtocolRecord("STEM", "PSP", satisfies=both, reviewed_against=both),
    )
    return Registry(cats, reqs, prots)
