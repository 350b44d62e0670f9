"""Network context: every symbol of the analytical models as typed, unit-annotated
configuration, plus derived geometry (density, expected neighbour count).

Units are fixed once for the whole toolkit: seconds, meters, bits, joules,
packets/second.  All values are immutable after construction; loaders validate,
plain dataclass construction does not (use :func:`validate`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class ScheduledParams:
    """Parameters of the scheduled (superframe) category.

    frame_len    superframe length [s]
    guard        guard time before a slot [s]; the idle-listen window is 2*guard
    slot_len     slot length [s]
    sync_len     sync packet length [bits]
    ack_len      ACK packet length [bits]
    sync_interval  seconds between sync rounds (default 48)
    """

    frame_len: float = 0.25
    guard: float = 0.001
    slot_len: float = 0.01
    sync_len: float = 256
    ack_len: float = 256
    sync_interval: float = 48.0


@dataclass(frozen=True)
class CapParams:
    """Parameters of the common-active-period category.

    duty_cycle       active fraction of each 1-second period, in (0, 1]
    rts_len/cts_len/ack_len/sync_len   control packet lengths [bits]
    cw_min           minimum contention window [slots]
    backoff_stages   number of window doublings until CW_max
    sync_interval    seconds between sync broadcasts (default 10)
    service_rate_mode  "bandwidth" takes the service rate mu as the raw
                       bandwidth value (the literal reading of the collision
                       model); "packets" uses mu = B / (msg+rts+cts+ack) in
                       packets/second.
    """

    duty_cycle: float = 0.1
    rts_len: float = 256
    cts_len: float = 256
    ack_len: float = 256
    sync_len: float = 256
    cw_min: int = 128
    backoff_stages: int = 5
    sync_interval: float = 10.0
    service_rate_mode: str = "bandwidth"


@dataclass(frozen=True)
class PspParams:
    """Parameters of the preamble-sampling category.

    preamble_len    preamble length [bits]; preamble_len/bandwidth must cover
                    at least one check interval so the destination hears it
    check_dur       duration of one channel check [s]
    check_interval  seconds between channel checks
    """

    preamble_len: float = 12800
    check_dur: float = 0.001
    check_interval: float = 0.05


@dataclass(frozen=True)
class NetworkContext:
    """The evaluation situation: deployment, traffic and per-category MAC
    parameters.

    n_nodes         node count
    network_radius  deployment field radius [m]
    tx_range        transmission range [m]
    pkt_rate        network-wide packet generation rate [packets/s]
    bandwidth       channel bandwidth [bits/s]
    msg_len         message length [bits]

    Defaults are repo calibration, not ground truth from any published
    parameter table; see README.
    """

    n_nodes: int = 100
    network_radius: float = 100.0
    tx_range: float = 20.0
    pkt_rate: float = 20.0
    bandwidth: float = 256_000.0
    msg_len: float = 1024
    sched: ScheduledParams = field(default_factory=ScheduledParams)
    cap: CapParams = field(default_factory=CapParams)
    psp: PspParams = field(default_factory=PspParams)


@dataclass(frozen=True)
class DerivedGeometry:
    """Node density [nodes/m^2] and expected neighbour count (fractional)."""

    density: float
    neighbors: float


def derive_geometry(ctx: NetworkContext) -> DerivedGeometry:
    """Density over the uniform disk and the expected number of neighbours.

    density   = n_nodes / (pi * network_radius^2)
    neighbors = density * pi * tx_range^2  (= n_nodes * tx_range^2 / radius^2)

    The neighbour count is kept fractional; every model formula uses it
    multiplicatively.
    """
    density = ctx.n_nodes / (math.pi * ctx.network_radius ** 2)
    neighbors = density * math.pi * ctx.tx_range ** 2
    return DerivedGeometry(density=density, neighbors=neighbors)


def validate(ctx: NetworkContext) -> list[str]:
    """Return a list of invariant violations, empty when the context is valid.

    Each message names the offending field and the violated rule; the
    function never raises.
    """
    v: list[str] = []
    if ctx.n_nodes < 1:
        v.append("n_nodes: must be >= 1")
    if not ctx.network_radius > 0:
        v.append("network_radius: must be > 0")
    if not ctx.tx_range > 0:
        v.append("tx_range: must be > 0")
    if ctx.pkt_rate < 0:
        v.append("pkt_rate: must be >= 0")
    if not ctx.bandwidth > 0:
        v.append("bandwidth: must be > 0")
    if not ctx.msg_len > 0:
        v.append("msg_len: must be > 0")

    s = ctx.sched
    if not s.frame_len > 0:
        v.append("sched.frame_len: must be > 0")
    elif not 0 < s.slot_len <= s.frame_len:
        v.append("sched.slot_len: must satisfy 0 < slot_len <= frame_len")
    if s.guard < 0:
        v.append("sched.guard: must be >= 0")
    if not s.sync_len > 0:
        v.append("sched.sync_len: must be > 0")
    if not s.ack_len > 0:
        v.append("sched.ack_len: must be > 0")
    if not s.sync_interval > 0:
        v.append("sched.sync_interval: must be > 0")

    c = ctx.cap
    if not 0 < c.duty_cycle <= 1:
        v.append("cap.duty_cycle: must be in (0, 1]")
    if c.cw_min < 2:
        v.append("cap.cw_min: must be >= 2")
    if c.backoff_stages < 0:
        v.append("cap.backoff_stages: must be >= 0")
    for name in ("rts_len", "cts_len", "ack_len", "sync_len"):
        if not getattr(c, name) > 0:
            v.append(f"cap.{name}: must be > 0")
    if not c.sync_interval > 0:
        v.append("cap.sync_interval: must be > 0")
    if c.service_rate_mode not in ("bandwidth", "packets"):
        v.append("cap.service_rate_mode: must be 'bandwidth' or 'packets'")

    p = ctx.psp
    if not p.preamble_len > 0:
        v.append("psp.preamble_len: must be > 0")
    if not 0 < p.check_dur <= p.check_interval:
        v.append("psp.check_dur: must satisfy 0 < check_dur <= check_interval")
    if ctx.bandwidth > 0 and p.preamble_len / ctx.bandwidth < p.check_interval:
        v.append(
            "psp.preamble_len: preamble_len/bandwidth must be >= check_interval "
            "(preamble must span at least one check interval)"
        )
    return v


# ---------------------------------------------------------------------------
# JSON loading.  Unknown keys are rejected at every level.

_SECTIONS = {"sched": ScheduledParams, "cap": CapParams, "psp": PspParams}


def _build_dataclass(cls, doc: dict, prefix: str):
    known = {f.name: f for f in fields(cls)}
    unknown = set(doc) - set(known)
    if unknown:
        raise ConfigError(
            [f"{prefix}{k}: unknown field" for k in sorted(unknown)]
        )
    kwargs = {}
    for key, value in doc.items():
        if key in _SECTIONS and cls is NetworkContext:
            if not isinstance(value, dict):
                raise ConfigError([f"{prefix}{key}: must be an object"])
            kwargs[key] = _build_dataclass(_SECTIONS[key], value, f"{prefix}{key}.")
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError([f"{prefix or cls.__name__}: {exc}"]) from exc


def context_from_dict(doc: dict) -> NetworkContext:
    """Build and validate a :class:`NetworkContext` from a plain dict.

    The document may be the bare context object or wrapped as
    ``{"context": {...}}``.  Raises :class:`ConfigError` naming every
    unknown key or violated invariant.
    """
    if not isinstance(doc, dict):
        raise ConfigError(["context: document must be a JSON object"])
    if "context" in doc and all(k in ("context", "profile", "sim") for k in doc):
        doc = doc["context"]
    ctx = _build_dataclass(NetworkContext, doc, "")
    violations = validate(ctx)
    if violations:
        raise ConfigError(violations)
    return ctx


def context_to_dict(ctx: NetworkContext) -> dict:
    out = {}
    for f in fields(NetworkContext):
        value = getattr(ctx, f.name)
        if f.name in _SECTIONS:
            out[f.name] = {g.name: getattr(value, g.name) for g in fields(value)}
        else:
            out[f.name] = value
    return out


def load_context(path: str | Path) -> NetworkContext:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: invalid JSON ({exc})"]) from exc
    return context_from_dict(doc)
