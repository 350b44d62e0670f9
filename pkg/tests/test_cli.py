import json
from pathlib import Path

import pytest

from macsel.cli import main
from macsel.registry import load_registry_file, save_registry_file, seed_registry

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_evaluate_table(capsys):
    code, out, err = run(capsys, ["evaluate"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("category ")
    assert [l.split()[0] for l in lines[1:4]] == ["ScP", "CAP", "PSP"]
    assert lines[4] == "best: PSP"


def test_evaluate_is_deterministic(capsys):
    _, first, _ = run(capsys, ["evaluate"])
    _, second, _ = run(capsys, ["evaluate"])
    assert first == second


def test_evaluate_from_config_files(capsys):
    code, out, _ = run(capsys, [
        "evaluate",
        "--context", str(CONFIGS / "default.json"),
        "--profile", str(CONFIGS / "default.json"),
    ])
    assert code == 0
    assert "best: PSP" in out


def test_evaluate_degenerate_weights(capsys):
    code, _, err = run(capsys, ["evaluate", "--alpha", "0", "--beta", "0"])
    assert code == 1
    assert "degenerate" in err


def test_evaluate_bad_context_file(capsys, tmp_path):
    bad = tmp_path / "ctx.json"
    bad.write_text(json.dumps({"n_nodes": 0}))
    code, _, err = run(capsys, ["evaluate", "--context", str(bad)])
    assert code == 1
    assert "n_nodes" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--axis", "frequency", "--from", "1", "--to", "2",
              "--steps", "2"])
    assert exc.value.code == 2


def test_select_scenario_one(capsys, tmp_path):
    ctx = tmp_path / "s1.json"
    ctx.write_text(json.dumps({"n_nodes": 90, "pkt_rate": 100.0}))
    code, out, _ = run(capsys, [
        "select", "--context", str(ctx),
        "--require", "overhearing-avoidance,distributed",
    ])
    assert code == 0
    assert "selected category: ScP" in out
    assert "selected protocols: AS-MAC, SMACS" in out


def test_select_scenario_two(capsys, tmp_path):
    ctx = tmp_path / "s2.json"
    ctx.write_text(json.dumps({"n_nodes": 110, "network_radius": 70.0,
                               "pkt_rate": 100.0}))
    code, out, _ = run(capsys, [
        "select", "--context", str(ctx),
        "--require", "overhearing-avoidance,distributed",
    ])
    assert code == 0
    assert "selected category: PSP" in out
    assert "selected protocols: STEM" in out


def test_select_unsatisfiable(capsys, tmp_path):
    reg_path = tmp_path / "reg.json"
    save_registry_file(seed_registry(), reg_path)
    code, _, err = run(capsys, [
        "registry", "add-requirement", "--registry", str(reg_path),
        "--name", "teleportation",
    ])
    assert code == 0
    code, _, err = run(capsys, [
        "select", "--registry", str(reg_path), "--require", "teleportation",
    ])
    assert code == 1
    assert "no satisfying category" in err


def test_sweep_csv(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, [
        "sweep", "--axis", "pkt_rate", "--from", "1", "--to", "20",
        "--steps", "2", "--out", str(out_path),
    ])
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == ("axis,category,collision,overhearing,idle,overhead,"
                        "total_energy,delay,cpf")
    assert len(lines) == 1 + 2 * 3


def test_sweep_unwritable_path(capsys):
    code, _, err = run(capsys, [
        "sweep", "--axis", "pkt_rate", "--from", "1", "--to", "2",
        "--steps", "2", "--out", "/proc/definitely/not/writable.csv",
    ])
    assert code == 1
    assert err


def test_sweep_needs_two_steps(capsys):
    code, _, err = run(capsys, [
        "sweep", "--axis", "pkt_rate", "--from", "1", "--to", "2", "--steps", "1",
    ])
    assert code == 1
    assert "steps" in err


def test_registry_add_and_list(capsys, tmp_path):
    reg_path = tmp_path / "reg.json"
    save_registry_file(seed_registry(), reg_path)
    code, out, _ = run(capsys, [
        "registry", "add-protocol", "--registry", str(reg_path),
        "--name", "X-MAC", "--category", "PSP", "--satisfies", "distributed",
    ])
    assert code == 0
    code, out, _ = run(capsys, ["registry", "list", "--registry", str(reg_path)])
    assert code == 0
    assert "X-MAC" in out


def test_registry_duplicate_leaves_file_untouched(capsys, tmp_path):
    reg_path = tmp_path / "reg.json"
    save_registry_file(seed_registry(), reg_path)
    before = reg_path.read_text()
    code, _, err = run(capsys, [
        "registry", "add-protocol", "--registry", str(reg_path),
        "--name", "SMAC", "--category", "CAP",
    ])
    assert code == 1
    assert "duplicate" in err
    assert reg_path.read_text() == before


def test_registry_env_variable(capsys, tmp_path, monkeypatch):
    reg_path = tmp_path / "reg.json"
    save_registry_file(seed_registry(), reg_path)
    monkeypatch.setenv("MACSEL_REGISTRY", str(reg_path))
    code, out, _ = run(capsys, [
        "registry", "add-category", "--name", "hybrid",
        "--representative", "Z-MAC",
    ])
    assert code == 0
    assert "hybrid" in {c.id for c in load_registry_file(reg_path).categories}


def test_registry_add_requirement_prints_worklist(capsys, tmp_path):
    reg_path = tmp_path / "reg.json"
    save_registry_file(seed_registry(), reg_path)
    code, out, _ = run(capsys, [
        "registry", "add-requirement", "--registry", str(reg_path),
        "--name", "mobility",
    ])
    assert code == 0
    assert "review worklist" in out
    assert "SMACS" in out


def test_simulate_unknown_protocol_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--protocol", "aloha", "--config", "x.json"])
    assert exc.value.code == 2


def test_simulate_psa_smoke(capsys, tmp_path):
    cfg = {
        "context": {"n_nodes": 20, "pkt_rate": 2.0},
        "profile": {},
        "sim": {"area": [60.0, 60.0], "seed": 3, "sim_duration": 3.0,
                 "max_reps": 3, "rel_error": 0.5},
    }
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(cfg))
    out_path = tmp_path / "stats.json"
    code, out, _ = run(capsys, [
        "simulate", "--protocol", "psa", "--config", str(path),
        "--out", str(out_path),
    ])
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["rng"] == "numpy-pcg64"
    assert doc["replications"] >= 3


def test_validate_exit_code_three_on_threshold(capsys, tmp_path):
    cfg = {
        "context": {"n_nodes": 20, "pkt_rate": 2.0},
        "profile": {},
        "sim": {"area": [60.0, 60.0], "seed": 3, "sim_duration": 3.0,
                 "max_reps": 3, "rel_error": 0.5},
    }
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(cfg))
    code, out, err = run(capsys, [
        "validate", "--protocol", "psa", "--config", str(path),
        "--points", "2", "--tolerance", "0.0",
    ])
    assert code == 3
    assert "validation failed" in err
