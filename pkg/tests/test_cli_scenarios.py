import json
import os

import numpy as np
import pytest

from liefock.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_RESOURCE, main
from liefock.errors import ConfigError, ResourceGuardError
from liefock.output import heatmap_bytes, read_heatmap
from liefock.scenarios import (
    BUILTIN_SCENARIOS,
    builtin_scenario,
    parse_config,
    run_scenario,
)


def test_builtin_registry_complete():
    assert set(BUILTIN_SCENARIOS) == {
        "su2_transport",
        "su3_center_release",
        "so5_quench",
        "ws_breathing",
        "ws_bloch",
        "squeeze_vac",
        "jc_sectors",
        "closure_gallery",
    }


def test_schema_round_trip():
    config = builtin_scenario("su2_transport", S=6, num=11)
    clone = parse_config(config.to_dict())
    assert clone.to_dict() == config.to_dict()
    assert clone.hash() == config.hash()


def test_unknown_field_rejected_with_path():
    payload = builtin_scenario("su2_transport", S=3, num=5).to_dict()
    payload["surprise"] = 1
    with pytest.raises(ConfigError, match="surprise"):
        parse_config(payload)
    payload = builtin_scenario("su2_transport", S=3, num=5).to_dict()
    payload["times"]["weird"] = 2
    with pytest.raises(ConfigError, match="times.weird"):
        parse_config(payload)


def test_empty_time_grid_rejected_naming_times():
    payload = builtin_scenario("su2_transport", S=3, num=5).to_dict()
    payload["times"]["num"] = 0
    with pytest.raises(ConfigError, match="times.num"):
        parse_config(payload)


def test_unknown_generator_label_rejected():
    payload = builtin_scenario("su2_transport", S=3, num=5).to_dict()
    payload["system"]["terms"][0]["label"] = "Q+"
    config = parse_config(payload)
    with pytest.raises(ConfigError, match="Q\\+"):
        run_scenario(config, out_dir="/tmp/liefock_bad")


def test_non_hermitian_combination_rejected():
    payload = builtin_scenario("su2_transport", S=3, num=5).to_dict()
    payload["system"]["terms"] = [{"label": "S+", "coeff": 1.0}]
    config = parse_config(payload)
    with pytest.raises(ConfigError, match="Hermitian"):
        run_scenario(config, out_dir="/tmp/liefock_bad")


def test_determinism_byte_identical(tmp_path):
    config = builtin_scenario("su2_transport", S=8, num=21)
    a1 = run_scenario(config, out_dir=tmp_path / "r1")
    a2 = run_scenario(config, out_dir=tmp_path / "r2")
    assert a1.config_hash == a2.config_hash
    for o1, o2 in zip(a1.outputs, a2.outputs):
        assert o1["path"] == o2["path"]
        assert o1["sha256"] == o2["sha256"]
        b1 = (tmp_path / "r1" / o1["path"]).read_bytes()
        b2 = (tmp_path / "r2" / o2["path"]).read_bytes()
        assert b1 == b2


def test_fig2_transfer_row(tmp_path):
    S = 10
    config = builtin_scenario("su2_transport", S=S, num=23)
    # grid chosen so pi/2 is on a node: stop = 1.1 pi, num = 23 -> step pi/20
    run_scenario(config, out_dir=tmp_path)
    lines = (tmp_path / "su2_transport.csv").read_text().splitlines()
    header = lines[0].split(",")
    k_half = 10  # t = pi/2
    row = dict(zip(header, (float(v) for v in lines[1 + k_half].split(","))))
    assert row["t"] == pytest.approx(np.pi / 2, abs=1e-12)
    assert row[f"P(-{S})"] > 1 - 1e-9  # opposite edge site
    assert row["norm"] == pytest.approx(1.0, abs=1e-10)


def test_fig3_mirror_symmetry_small(tmp_path):
    config = builtin_scenario("su3_center_release", N=9, phi=0.0, t_snap=0.3)
    run_scenario(config, out_dir=tmp_path)
    graph = json.loads((tmp_path / "su3_center_release_graph.json").read_text())
    assert len(graph["vertices"]) == 10 * 11 // 2
    # mirror symmetry of the final snapshot under swapping modes a and c
    from liefock.scenarios import _build_initial_state, _build_system
    from liefock.dynamics import evolve

    basis, H, model, _ = _build_system(config.system)
    psi0 = _build_initial_state(config.initial_state, basis)
    res = evolve(H, psi0, np.array([0.3]))
    P = res.populations[0]
    perm = np.array([basis.index_of((s[2], s[1], s[0])) for s in basis.states])
    tv = 0.5 * np.sum(np.abs(P - P[perm]))
    assert tv < 1e-9


def test_fig4_chirality_small(tmp_path):
    sym = builtin_scenario("so5_quench", N=8, phi=0.0, start="center", t_snap=0.6)
    chi = builtin_scenario("so5_quench", N=8, phi=np.pi / 2, start="center", t_snap=0.6)
    run_scenario(sym, out_dir=tmp_path / "sym")
    run_scenario(chi, out_dir=tmp_path / "chi")

    def grid_of(d):
        arr, peak, transform = read_heatmap(d / "so5_quench.pgm")
        assert transform == "fourth_root"
        return arr.astype(float)

    g_sym = grid_of(tmp_path / "sym")
    g_chi = grid_of(tmp_path / "chi")
    # m1 -> -m1 mirror: reverse columns
    assert np.max(np.abs(g_sym - g_sym[:, ::-1])) <= 1.0  # symmetric (rounding only)
    assert np.max(np.abs(g_chi - g_chi[:, ::-1])) > 300   # visibly chiral


def test_resource_guard_raises():
    with pytest.raises(ResourceGuardError):
        config = builtin_scenario("su3_center_release", N=120, method="dense_eig")
        run_scenario(config, out_dir="/tmp/liefock_guard")


def test_amplitude_initial_state_round_trip(tmp_path):
    config = builtin_scenario("ws_bloch", L=31, num=11)
    archive = run_scenario(config, out_dir=tmp_path)
    assert any(o["path"] == "ws_bloch.csv" for o in archive.outputs)
    text = (tmp_path / "ws_bloch.csv").read_text()
    assert text.splitlines()[0].startswith("t,fidelity,norm,position")


# ---------------------------------------------------------------------------
# heatmap writer
# ---------------------------------------------------------------------------


def test_heatmap_single_pixel(tmp_path):
    from liefock.output import export_heatmap

    path = tmp_path / "one.pgm"
    export_heatmap(np.array([[0.37]]), path)
    arr, peak, transform = read_heatmap(path)
    assert arr.shape == (1, 1) and arr[0, 0] == 65535
    assert peak == pytest.approx(0.37)
    assert transform == "none"


def test_heatmap_constant_and_fourth_root(tmp_path):
    data = np.full((3, 5), 2.0)
    blob = heatmap_bytes(data)
    assert blob.startswith(b"P5\n")
    arr = np.frombuffer(blob.rsplit(b"65535\n", 1)[1], dtype=">u2").reshape(3, 5)
    assert np.all(arr == 65535)  # uniform image
    blob_root = heatmap_bytes(np.array([[16.0, 1.0]]), fourth_root=True)
    arr = np.frombuffer(blob_root.rsplit(b"65535\n", 1)[1], dtype=">u2")
    assert arr[0] == 65535 and arr[1] == pytest.approx(65535 / 2, abs=1)


def test_heatmap_rejects_bad_input():
    with pytest.raises(ValueError):
        heatmap_bytes(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        heatmap_bytes(np.array([[1.0, -0.5]]))


# ---------------------------------------------------------------------------
# CLI entry points and exit codes
# ---------------------------------------------------------------------------


def test_cli_scenario_list(capsys):
    assert main(["scenario", "list"]) == EXIT_OK
    out = capsys.readouterr().out.split()
    assert "su2_transport" in out and "closure_gallery" in out


def test_cli_algebra_verify(capsys):
    code = main(["algebra", "su2_schwinger", "--params", '{"N": 3}', "--verify"])
    assert code == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["cartan_ok"] and report["root_eigen_ok"]
    assert report["closure"]["dim"] == 3


def test_cli_algebra_bad_params_exit_code(capsys):
    assert main(["algebra", "su11_single", "--params", '{"k": "1/2"}']) == EXIT_CONFIG


def test_cli_closure_gallery_members(capsys):
    assert main(["closure", "lmg", "--cap", "32"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert not report["closed"] and report["dimension"] > 32


def test_cli_oracle(capsys):
    code = main(["oracle", "su2_hopping", "--params", '{"J0": 1.0, "N": 4, "j": 1}'])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["values"][0] == pytest.approx(np.sqrt(6))
    assert main(["oracle", "nope"]) == EXIT_CONFIG


def test_cli_scenario_run_and_evolve(tmp_path, capsys):
    code = main(
        [
            "--out-dir", str(tmp_path),
            "scenario", "run", "--name", "su2_transport",
            "--params", '{"S": 4, "num": 9}',
        ]
    )
    assert code == EXIT_OK
    manifest = json.loads(capsys.readouterr().out)
    assert manifest["outputs"][0]["path"] == "su2_transport.csv"

    config_path = tmp_path / "cfg.json"
    config_path.write_text(json.dumps(builtin_scenario("su2_transport", S=4, num=9).to_dict()))
    code = main(
        ["--out-dir", str(tmp_path / "ev"), "evolve", "--scenario", str(config_path), "--out", "x.csv"]
    )
    assert code == EXIT_OK
    assert (tmp_path / "ev" / "x.csv").exists()


def test_cli_scenario_missing_args(capsys):
    assert main(["scenario", "run"]) == EXIT_CONFIG


def test_cli_resource_guard_exit(tmp_path, capsys):
    code = main(
        [
            "--out-dir", str(tmp_path),
            "scenario", "run", "--name", "su3_center_release",
            "--params", '{"N": 120, "method": "dense_eig"}',
        ]
    )
    assert code == EXIT_RESOURCE


def test_cli_lattice_and_husimi(tmp_path, capsys):
    spec = {
        "algebra": {"name": "su2_schwinger", "params": {"N": 4}},
        "terms": [{"label": "S+", "coeff": 1.0}, {"label": "S-", "coeff": 1.0}],
    }
    ham = tmp_path / "sys.json"
    ham.write_text(json.dumps(spec))
    code = main(
        ["lattice", "--ham", str(ham), "--export", str(tmp_path / "g.json"), "--fluxes"]
    )
    assert code == EXIT_OK
    payload = json.loads((tmp_path / "g.json").read_text())
    assert len(payload["vertices"]) == 5
    assert payload["components"] == [5]

    state = {
        "basis": {"modes": [{"kind": "spin", "capacity": 8}]},
        "state": {"coherent": {"kind": "spin", "S": 4, "theta": 0.9, "phi": 0.2}},
        "space_params": {"S": 4},
    }
    spath = tmp_path / "state.json"
    spath.write_text(json.dumps(state))
    code = main(
        [
            "husimi", "--state", str(spath), "--space", "sphere",
            "--out", str(tmp_path / "q.csv"), "--heatmap", str(tmp_path / "q.pgm"),
            "--nodes", "60", "60",
        ]
    )
    assert code == EXIT_OK
    assert (tmp_path / "q.csv").exists() and (tmp_path / "q.pgm").exists()


def test_cli_missing_file_exit(capsys):
    assert main(["evolve", "--scenario", "/nonexistent/file.json"]) == EXIT_CONFIG


def test_cli_numeric_contract_exit(tmp_path, monkeypatch, capsys):
    from liefock import cli
    from liefock.errors import NumericContractError

    def boom(*args, **kwargs):
        raise NumericContractError("unitarity breach: test stub")

    monkeypatch.setattr(cli, "run_scenario", boom)
    code = main(
        ["--out-dir", str(tmp_path), "scenario", "run", "--name", "su2_transport",
         "--params", '{"S": 2, "num": 3}']
    )
    assert code == EXIT_NUMERIC
    assert "unitarity" in capsys.readouterr().err


def test_scenario_so5_roots_revival(tmp_path):
    # criterion-7 physics through the scenario engine: the root-combination
    # form at phi = pi revives at pi*sqrt(2)
    t_rev = float(np.pi * np.sqrt(2))
    config = builtin_scenario(
        "so5_quench", N=6, phi=float(np.pi), start="corner", form="roots", t_snap=t_rev
    )
    run_scenario(config, out_dir=tmp_path)
    lines = (tmp_path / "so5_quench.csv").read_text().splitlines()
    header = lines[0].split(",")
    last = dict(zip(header, (float(v) for v in lines[-1].split(","))))
    assert last["t"] == pytest.approx(t_rev)
    assert last["fidelity"] > 1 - 1e-6


def test_scenario_husimi_output(tmp_path):
    payload = builtin_scenario("su2_transport", S=5, num=5).to_dict()
    payload["outputs"] = {
        "husimi": {"space": "sphere", "path": "q.csv", "time_index": 0, "nodes": [40, 40]}
    }
    config = parse_config(payload)
    run_scenario(config, out_dir=tmp_path)
    lines = (tmp_path / "q.csv").read_text().splitlines()
    assert lines[0] == "coord_a,coord_b,weight,value"
    total = 0.0
    for line in lines[1:]:
        _, _, w, v = (float(x) for x in line.split(","))
        total += w * v
    assert total == pytest.approx(1.0, abs=1e-6)
