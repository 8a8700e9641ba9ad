"""CLI contract: subcommands, exit codes, file outputs, determinism."""

import json
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "phasecert.cli"]


def run(args, cwd, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run(CLI + args, capture_output=True, text=True, cwd=cwd, env=e)


@pytest.fixture(scope="module")
def stable_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("stable")
    r = run(["certify", "infbus_stable", "--out-dir", str(out),
             "--grid", "0.01:10000:120"], cwd=str(out))
    return r, out


class TestCertify:
    def test_certified_exit_zero(self, stable_run):
        r, out = stable_run
        assert r.returncode == 0, r.stderr
        assert "certified" in r.stdout

    def test_writes_reports(self, stable_run):
        _, out = stable_run
        for name in ("report.json", "sweep.csv", "eigphase.csv"):
            assert (out / name).exists()
        report = json.loads((out / "report.json").read_text())
        assert report["certified"] is True
        assert report["schema"] == "phasecert.report.v1"
        assert report["frame"]["kind"] == "blended"

    def test_not_certified_exit_two(self, tmp_path):
        r = run(["certify", "infbus_unstable", "--out-dir", str(tmp_path),
                 "--grid", "0.01:10000:80"], cwd=str(tmp_path))
        assert r.returncode == 2
        assert "not certified" in r.stdout
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["certified"] is False
        assert "inconclusive" in report["note"]

    def test_malformed_config_exit_one(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("name = \"x\"\n[network\n")
        r = run(["certify", str(bad)], cwd=str(tmp_path))
        assert r.returncode != 0
        assert "error" in (r.stderr + r.stdout).lower()

    def test_missing_key_diagnostic(self, tmp_path):
        bad = tmp_path / "bad2.toml"
        bad.write_text('name = "x"\n[network]\nw0_hz = 50.0\n')
        r = run(["certify", str(bad), "--out-dir", str(tmp_path)], cwd=str(tmp_path))
        assert r.returncode == 1
        assert "network" in r.stderr

    def test_unknown_scenario(self, tmp_path):
        r = run(["certify", "no_such_fixture"], cwd=str(tmp_path))
        assert r.returncode == 1

    def test_deterministic_outputs(self, tmp_path):
        outs = []
        for k in range(2):
            d = tmp_path / f"run{k}"
            d.mkdir()
            r = run(["certify", "infbus_stable", "--out-dir", str(d),
                     "--grid", "0.1:1000:40"], cwd=str(tmp_path))
            assert r.returncode == 0
            outs.append((d / "sweep.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_out_dir_env_override(self, tmp_path):
        target = tmp_path / "env_target"
        r = run(["certify", "infbus_stable", "--grid", "1:100:10"],
                cwd=str(tmp_path), env={"PHASECERT_OUT_DIR": str(target)})
        assert r.returncode == 0
        assert (target / "report.json").exists()


class TestSweep:
    def test_schema_and_monotone_grid(self, tmp_path):
        r = run(["sweep", "infbus_stable", "--out-dir", str(tmp_path),
                 "--grid", "0.1:1000:30", "--frame", "rectangular"], cwd=str(tmp_path))
        assert r.returncode == 0
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert lines[0].startswith("# schema=phasecert.sweep.v1")
        assert "frame=rectangular" in lines[0]
        fs = [float(l.split(",")[0]) for l in lines[2:]]
        assert all(b > a for a, b in zip(fs, fs[1:]))


class TestEig:
    def test_stable_all_left(self, tmp_path):
        r = run(["eig", "infbus_stable", "--out-dir", str(tmp_path)], cwd=str(tmp_path))
        assert r.returncode == 0 and "stable" in r.stdout
        rows = (tmp_path / "eig.csv").read_text().splitlines()[2:]
        assert all(float(row.split(",")[1]) < 0 for row in rows)

    def test_unstable_has_rhp_pair(self, tmp_path):
        r = run(["eig", "infbus_unstable", "--out-dir", str(tmp_path)], cwd=str(tmp_path))
        assert r.returncode == 0 and "UNSTABLE" in r.stdout
        rows = (tmp_path / "eig.csv").read_text().splitlines()[2:]
        rhp = [row for row in rows if float(row.split(",")[1]) > 0]
        assert len(rhp) == 2

    def test_network_only(self, tmp_path):
        cfg = tmp_path / "netonly.toml"
        cfg.write_text(
            'name = "netonly"\n'
            "[network]\nw0_hz = 50.0\n"
            "[[network.bus]]\nid = 1\ntype = \"slack\"\n"
            "[[network.bus]]\nid = 2\np_load = 0.3\n"
            "[[network.branch]]\nfrom = 1\nto = 2\nr = 0.05\nx = 0.4\nb = 0.02\n"
        )
        r = run(["eig", str(cfg), "--out-dir", str(tmp_path)], cwd=str(tmp_path))
        assert r.returncode == 0 and "stable" in r.stdout
        rows = (tmp_path / "eig.csv").read_text().splitlines()[2:]
        assert rows and all(float(row.split(",")[1]) < 0 for row in rows)


class TestVerify:
    def test_default_passes(self, tmp_path):
        r = run(["verify", "--trials", "40"], cwd=str(tmp_path))
        assert r.returncode == 0
        assert r.stdout.count("pass") == 4

    def test_seed_reproducible(self, tmp_path):
        a = run(["verify", "--trials", "30", "--seed", "5"], cwd=str(tmp_path))
        b = run(["verify", "--trials", "30", "--seed", "5"], cwd=str(tmp_path))
        assert a.stdout == b.stdout

    def test_trials_scale(self, tmp_path):
        r = run(["verify", "--trials", "24"], cwd=str(tmp_path))
        assert "24 trials" in r.stdout


class TestList:
    def test_lists_builtins(self, tmp_path):
        r = run(["list"], cwd=str(tmp_path))
        assert r.returncode == 0
        for name in ("infbus_stable", "infbus_unstable", "ieee14_stable",
                     "ieee14_detuned", "ieee14_retuned"):
            assert name in r.stdout


class TestReadmeSnippet:
    def test_api_sketch_runs(self):
        from phasecert import certify, ground_truth
        from phasecert.lti import FrequencyGrid
        from phasecert.scenario import assemble_scenario, load_scenario

        asm = assemble_scenario(load_scenario("infbus_stable"))
        report = certify(asm.conv_models, asm.buses, asm.network,
                         asm.transform_set(), FrequencyGrid.default(points=60))
        truth = ground_truth(asm.conv_models, asm.network)
        assert report.certified and truth.stable
