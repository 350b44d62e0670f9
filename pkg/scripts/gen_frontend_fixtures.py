#!/usr/bin/env python3
"""Regenerate the web console's parity fixtures from the CLI and service.

Run from the repo root after any change to CLI formatting, validation rules
or the default calibration:

    python3 scripts/gen_frontend_fixtures.py
"""

import contextlib
import io
import json
import os
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from macsel.cli import main as cli_main
from macsel.context import NetworkContext, context_to_dict
from macsel.numfmt import sig6
from macsel.radio import RadioProfile, profile_to_dict
from macsel.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

REQUIREMENTS = ["overhearing-avoidance", "distributed"]
SCENARIOS = {
    "scenario1": {"n_nodes": 90, "pkt_rate": 100.0},
    "scenario2": {"n_nodes": 110, "network_radius": 70.0, "pkt_rate": 100.0},
}
FORMAT_VALUES = [
    0.0, -0.0, 1.0, 0.135, 6.265092532429619, 0.4789276812622425,
    1.2622424495112226e-09, 0.0001008635002496656, 256000.0, 2560000.0,
    1e-05, 0.0001, 123456789.0, 0.05887308625375947, 3.6e-07,
    0.9999995, 0.99999951, 9.999996e-05, 400.0, 58.142857142857146,
    -0.000123456789, 7.0, 1e16, 123456.49999, 2116.0,
]
VALIDATION_BODIES = [
    {"context": {}, "profile": {}, "weights": {}},
    {"context": {"n_nodes": 90, "pkt_rate": 100.0}, "profile": {}, "weights": {}},
    {"context": {"n_nodes": 0}, "profile": {}, "weights": {}},
    {"context": {"network_radius": -1.0}, "profile": {}, "weights": {}},
    {"context": {"made_up_field": 3}, "profile": {}, "weights": {}},
    {"context": {"cap": {"duty_cycle": 1.5}}, "profile": {}, "weights": {}},
    {"context": {"cap": {"duty_cycle": 0.0}}, "profile": {}, "weights": {}},
    {"context": {"cap": {"cw_min": 1}}, "profile": {}, "weights": {}},
    {"context": {"psp": {"preamble_len": 100}}, "profile": {}, "weights": {}},
    {"context": {"psp": {"check_dur": 0.2}}, "profile": {}, "weights": {}},
    {"context": {"sched": {"slot_len": 0.5}}, "profile": {}, "weights": {}},
    {"context": {"sched": {"guard": -0.1}}, "profile": {}, "weights": {}},
    {"context": {"msg_len": 0}, "profile": {}, "weights": {}},
    {"context": {"bandwidth": -5}, "profile": {}, "weights": {}},
    {"context": {}, "profile": {"e_elec": -1e-9}, "weights": {}},
    {"context": {}, "profile": {"made_up": 1}, "weights": {}},
    {"context": {}, "profile": {}, "weights": {"alpha": 0, "beta": 0}},
    {"context": {}, "profile": {}, "weights": {"alpha": -1, "beta": 1}},
    {"context": {"cap": {"service_rate_mode": "warp"}}, "profile": {}, "weights": {}},
    {"context": {"pkt_rate": -2}, "profile": {}, "weights": {}},
]


def cli_stdout(argv) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        rc = cli_main(argv)
    assert rc == 0, argv
    return buf.getvalue()


def write(name: str, payload) -> None:
    path = FIXTURES / name
    if isinstance(payload, str):
        path.write_text(payload)
    else:
        path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    for name, ctx in SCENARIOS.items():
        resp = client.post("/api/select", json={
            "context": ctx, "profile": {}, "weights": {},
            "requirements": REQUIREMENTS,
        })
        assert resp.status_code == 200
        write(f"select_{name}.json", resp.json())
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as tf:
            json.dump(ctx, tf)
            tmp = tf.name
        try:
            write(f"select_{name}_cli.txt", cli_stdout(
                ["select", "--context", tmp, "--require", ",".join(REQUIREMENTS)]))
        finally:
            os.unlink(tmp)

    sweep_args = {"axis": "pkt_rate", "from": 1.0, "to": 400.0, "steps": 8}
    resp = client.post("/api/sweep", json={
        "context": {}, "profile": {}, "weights": {}, **sweep_args})
    assert resp.status_code == 200
    write("sweep_response.json", resp.json())
    write("sweep_cli.csv", cli_stdout(
        ["sweep", "--axis", "pkt_rate", "--from", "1", "--to", "400",
         "--steps", "8"]))

    write("format_cases.json", {repr(v): sig6(v) for v in FORMAT_VALUES})

    cases = []
    for body in VALIDATION_BODIES:
        resp = client.post("/api/evaluate", json=body)
        cases.append({"body": body, "status": resp.status_code})
    write("validation_cases.json", cases)

    write("defaults.json", {"context": context_to_dict(NetworkContext()),
                            "profile": profile_to_dict(RadioProfile())})


if __name__ == "__main__":
    main()
