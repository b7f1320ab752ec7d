import io
import json
import subprocess
import sys

import jsonschema
import pytest

from qslab import cli, schemas


def run(*argv):
    out = io.StringIO()
    status = cli.run(list(argv), stdout=out)
    return status, out.getvalue()


def run_json(*argv):
    status, text = run(*argv, "--format", "json")
    return status, json.loads(text)


class TestDeterministicCommands:
    def test_moments(self):
        status, doc = run_json("moments", "--n", "4")
        rec = doc["records"][0]
        assert status == 0
        assert rec["mean"] == "29/6" and rec["variance"] == "29/36"
        assert rec["mode"] == "exact" and rec["anchor"]

    def test_dist(self):
        status, doc = run_json("dist", "--n", "3", "--m", "4", "--p", "2")
        assert status == 0 and doc["records"][0]["d_p_power"] == "149/5184"

    def test_dist_ks(self):
        status, doc = run_json("dist", "--n", "3", "--m", "4", "--metric", "ks")
        assert doc["records"][0]["ks"] == "1/3"

    def test_pmf_csv(self):
        status, text = run("pmf", "--n", "4", "--format", "csv")
        assert text.splitlines() == [
            "n,k,mass,anchor,mode",
            "4,4,1/2,exact-law,exact",
            "4,5,1/6,exact-law,exact",
            "4,6,1/3,exact-law,exact",
        ]

    def test_table(self):
        status, text = run("toll", "--n", "3", "--format", "table")
        assert status == 0 and "1/9" in text and "-2/9" in text

    def test_certificate(self):
        status, doc = run_json("certify-d2", "--N", "100")
        assert status == 0
        jsonschema.validate(doc, schemas.load("certificate"))
        assert doc["final_A"] < 2
        assert abs(doc["Vbar_N"] - 1.1995) <= 5e-5

    def test_certificate_failure_exit(self):
        status, doc = run_json("certify-d2", "--N", "100", "--seed-A", "3")
        assert status == 1 and doc["passed"] is False
        jsonschema.validate(doc, schemas.load("certificate"))

    def test_bn_and_ledger(self):
        status, doc = run_json("bn", "--n", "20", "--m", "18")
        assert status == 0 and [r["n"] for r in doc["records"]] == [18, 19, 20]
        status, text = run("ledger", "--N", "10", "--format", "csv")
        assert status == 0 and len(text.splitlines()) == 11

    def test_mgf_and_ldp(self):
        status, doc = run_json("mgf", "--n", "10")
        assert status == 0 and len(doc["records"]) == 9
        assert all(r["margin"] >= 0 for r in doc["records"])
        status, doc = run_json("ldp", "--n", "20", "--eps", "0.3", "--lam", "0.5", "1")
        assert status == 0 and all(r["holds"] for r in doc["records"])

    def test_floats_have_17_digits(self):
        _, text = run("moments", "--n", "7", "--format", "csv")
        sd = text.splitlines()[1].split(",")[4]
        assert sd == format(float(sd), ".17g")

    def test_byte_identical(self):
        assert run("mgf", "--n", "12")[1] == run("mgf", "--n", "12")[1]


class TestMonteCarloCommands:
    def test_simulate_batch_schema(self):
        status, doc = run_json("simulate", "--n", "30", "--reps", "200", "--seed", "5")
        assert status == 0
        jsonschema.validate(doc, schemas.load("batch"))
        assert sum(doc["counts_histogram"].values()) == 200

    def test_seeded_output_is_byte_identical(self):
        args = ("simulate", "--n", "40", "--reps", "300", "--seed", "8")
        assert run(*args)[1] == run(*args)[1]
        assert run(*args)[1] != run("simulate", "--n", "40", "--reps", "300", "--seed", "9")[1]

    def test_density_rows_carry_seed(self):
        status, doc = run_json("density", "--n", "200", "--reps", "2000", "--seed", "1", "--grid", "-1", "1", "11")
        assert status == 0 and len(doc["records"]) == 11
        assert all(r["seed"] == 1 and r["mode"] == "monte-carlo" for r in doc["records"])

    def test_fixed_point_and_local_limit(self):
        status, doc = run_json("fixed-point", "--n", "10", "--reps", "2000", "--seed", "2")
        assert status == 0 and 0 < doc["records"][0]["ks_residual"] < 1
        status, doc = run_json("local-limit", "--n", "8", "--m", "500", "--reps", "2000", "--seed", "2")
        assert status == 0 and len(doc["records"]) > 0

    @pytest.mark.parametrize("cmd", ["simulate", "density", "fixed-point", "local-limit"])
    def test_seed_required(self, cmd):
        assert run(cmd, "--n", "5")[0] == 2


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["pmf", "--n", "60"],
            ["pmf"],
            ["dist", "--n", "3"],
            ["ldp", "--n", "2", "--eps", "0.1"],
            ["ldp", "--n", "10", "--eps", "-1"],
            ["verify", "--suite", "limit"],
            ["pmf", "--n", "3", "--bogus"],
            ["nonsense"],
        ],
    )
    def test_exit_two(self, argv, capsys):
        assert cli.run(argv, stdout=io.StringIO()) == 2

    def test_n_max_raises_cap(self):
        assert run("pmf", "--n", "55", "--n-max", "60")[0] == 0


class TestConfig:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        status, _ = run("dist", "--n", "3", "--m", "9", "--p", "3", "--config-out", str(path))
        cfg = cli.RunConfig.from_json(path.read_text())
        assert status == 0 and cfg.command == "dist" and (cfg.n, cfg.m, cfg.p) == (3, 9, 3.0)
        assert cli.RunConfig.from_json(cfg.to_json()) == cfg

    def test_validation_before_compute(self):
        cfg = cli.RunConfig("density", n=100, reps=10, seed=1, grid=[1.0, 0.0, 5])
        with pytest.raises(cli.UsageError):
            cfg.validate()

    def test_cache_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QSLAB_CACHE_DIR", str(tmp_path))
        assert run("pmf", "--n", "6")[0] == 0
        assert (tmp_path / "pmf_6.json").exists()


class TestVerify:
    def test_core_suite(self):
        status, doc = run_json("verify", "--suite", "core")
        assert status == 0 and doc["passed"]
        jsonschema.validate(doc, schemas.load("report"))

    def test_mgf_suite(self):
        status, doc = run_json("verify", "--suite", "mgf", "--seed", "7")
        assert status == 0
        names = [c["name"] for c in doc["suites"][0]["checks"]]
        assert any("conjecture" in n for n in names)

    def test_failure_exit(self, monkeypatch):
        from qslab import verify

        bad = lambda: [verify.Check("always fails", False, "none", "exact")]  # noqa: E731
        monkeypatch.setitem(verify.SUITES, "core", bad)
        status, doc = run_json("verify", "--suite", "core")
        assert status == 1 and doc["passed"] is False

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qslab.cli", "moments", "--n", "3", "--format", "csv"],
            capture_output=True, text=True, check=True,
        )
        assert "8/3,2/9" in proc.stdout
