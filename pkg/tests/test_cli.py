import csv
import io
import json
import math

import pytest

from rumorlab.cli import main
from rumorlab.errors import NumericFault


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def manifest_of(text):
    for line in text.splitlines():
        if line.startswith("# manifest: "):
            return json.loads(line[len("# manifest: "):])
    raise AssertionError("no manifest preamble found")


class TestPcTable:
    def test_reference_values_csv(self, capsys):
        code, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "11", "--seed", "1"], capsys)
        assert code == 0
        rows = parse_csv(out)
        assert [r["d"] for r in rows] == [str(d) for d in range(3, 12)]
        truncated = [
            f"{math.floor(float(r['pc_float']) * 10000) / 10000:.4f}" for r in rows
        ]
        assert truncated == [
            "0.8205", "0.6620", "0.5634", "0.4955", "0.4454",
            "0.4067", "0.3759", "0.3505", "0.3293",
        ]
        assert rows[0]["pc_numerator"] == "32"
        assert rows[0]["pc_denominator"] == "39"

    def test_json_single_record(self, capsys):
        code, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "3", "--seed", "1", "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        (row,) = doc["rows"]
        assert (row["pc_numerator"], row["pc_denominator"]) == ("32", "39")
        assert doc["manifest"]["command"] == "pc-table"

    def test_empty_range_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["pc-table", "--d-min", "4", "--d-max", "3", "--seed", "1"])
        assert exc.value.code == 2

    def test_d_below_three_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["pc-table", "--d-min", "2", "--seed", "1"])
        assert exc.value.code == 2

    def test_float_mode_omits_fractions(self, capsys):
        code, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "3", "--float", "--seed", "1"], capsys)
        rows = parse_csv(out)
        assert rows[0]["pc_numerator"] == ""
        assert float(rows[0]["pc_float"]) == pytest.approx(32 / 39, rel=1e-12)


class TestTheta:
    def test_subcritical_analytic(self, capsys):
        code, out = run_cli(["theta", "4", "0.5", "--seed", "1", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["analytic"] == 0.0

    def test_analytic_p_one(self, capsys):
        code, out = run_cli(["theta", "3", "1.0", "--seed", "1", "--format", "json"], capsys)
        assert json.loads(out)["analytic"] == pytest.approx(0.6612889232198165, abs=1e-10)

    def test_all_methods_cover_analytic(self, capsys):
        code, out = run_cli(
            ["theta", "4", "0.9", "--method", "all", "--replicas", "4000",
             "--seed", "7", "--format", "json"],
            capsys,
        )
        doc = json.loads(out)
        analytic = doc["analytic"]
        for key in ("gw_mc", "ctmc_mc"):
            assert doc[key]["ci_low"] - 0.01 <= analytic <= doc[key]["ci_high"] + 0.01

    def test_rejects_bad_p(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["theta", "4", "1.5", "--seed", "1"])
        assert exc.value.code == 2


class TestPsiAlphaMaxH:
    def test_psi_report(self, capsys):
        code, out = run_cli(["psi", "3", "1.0", "--seed", "1"], capsys)
        rows = parse_csv(out)
        assert float(rows[0]["psi"]) == pytest.approx(0.5819888974715749, abs=1e-10)
        assert float(rows[0]["residual"]) <= 1e-10

    def test_alpha_c_h1_equals_pc(self, capsys):
        _, out_a = run_cli(["alpha-c", "5", "3", "1", "--seed", "1"], capsys)
        rows = parse_csv(out_a)
        assert rows[0]["alpha_c_numerator"] == "324"
        assert rows[0]["alpha_c_denominator"] == "575"
        assert rows[0]["feasible"] == "True"

    def test_alpha_c_infeasible(self, capsys):
        _, out = run_cli(["alpha-c", "5", "3", "2", "--seed", "1"], capsys)
        rows = parse_csv(out)
        assert float(rows[0]["alpha_c_float"]) == pytest.approx(1.690435, abs=1e-5)
        assert rows[0]["feasible"] == "False"

    def test_max_h(self, capsys):
        code, out = run_cli(["max-h", "5", "3", "--seed", "1", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["h_max"] == 1
        assert doc["asymptotic_bound_logd_logk"] == pytest.approx(math.log(5) / math.log(3))

    def test_max_h_annotates_log_regime(self, capsys):
        # k within [0.5 log d, 2 log d] triggers the log d / log log d note
        _, out = run_cli(["max-h", "1000", "10", "--seed", "1", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["h_max"] == 3
        assert doc["k_theta_logd"] is True
        assert doc["asymptotic_bound_logd_loglogd"] == pytest.approx(
            math.log(1000) / math.log(math.log(1000))
        )


class TestAuditBeta:
    def test_k3_report(self, capsys):
        code, out = run_cli(
            ["audit-beta", "3", "--replicas", "100000", "--seed", "3", "--format", "json"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["beta_paper"] == pytest.approx(1 / 3)
        assert doc["beta_series"] == pytest.approx(4 / 9)
        assert doc["exact_gap"] == "1/9"
        emp = doc["empirical"]
        assert emp["ci_low"] <= 4 / 9 <= emp["ci_high"]
        assert doc["empirical_covers"] == "series"

    def test_k30_forms_agree(self, capsys):
        _, out = run_cli(["audit-beta", "30", "--replicas", "1000", "--seed", "3", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["beta_paper"] == pytest.approx(doc["beta_series"], rel=1e-10)

    def test_k2_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["audit-beta", "2", "--seed", "1"])
        assert exc.value.code == 2


class TestOffspring:
    def test_report(self, capsys):
        code, out = run_cli(
            ["offspring", "3", "1.0", "--replicas", "50000", "--seed", "4", "--format", "json"],
            capsys,
        )
        doc = json.loads(out)
        assert doc["tv_distance"] < 0.02
        assert doc["analytic_mean"] == pytest.approx(1.21875)
        assert len(doc["rows"]) == 4


class TestSimulate:
    def test_json_report_and_determinism(self, capsys, tmp_path):
        argv = [
            "simulate", "--tree", "cayley", "--d", "4", "--p", "0.9",
            "--level", "10", "--replicas", "500", "--seed", "5", "--format", "json",
        ]
        _, out1 = run_cli(argv, capsys)
        _, out2 = run_cli(argv, capsys)
        doc1, doc2 = json.loads(out1), json.loads(out2)
        doc1["manifest"].pop("duration_s")
        doc2["manifest"].pop("duration_s")
        assert doc1 == doc2
        assert {"estimate", "ci_low", "ci_high", "replicas", "cap_hits"} <= set(doc1)

    def test_writes_output_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run_cli(
            ["simulate", "--tree", "cayley", "--d", "3", "--p", "1.0", "--level", "5",
             "--replicas", "200", "--seed", "6", "--format", "json", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["manifest"]["seed"] == 6

    def test_hub_path_flags(self, capsys):
        code, out = run_cli(
            ["simulate", "--tree", "hub_path", "--d", "5", "--k", "4", "--alpha", "0.9",
             "--h", "4", "--p", "1.0", "--level", "3", "--replicas", "300",
             "--seed", "7", "--format", "json"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["level_unit"] == "hub"

    def test_alpha_without_hub_path_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--tree", "cayley", "--d", "4", "--alpha", "0.5", "--seed", "1"])
        assert exc.value.code == 2

    def test_hub_path_missing_params_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--tree", "hub_path", "--d", "5", "--k", "4", "--seed", "1"])
        assert exc.value.code == 2

    def test_level_sweep_csv(self, capsys):
        code, out = run_cli(
            ["simulate", "--tree", "cayley", "--d", "3", "--p", "1.0",
             "--level-sweep", "2:6:2", "--replicas", "300", "--seed", "8"],
            capsys,
        )
        rows = parse_csv(out)
        assert [r["level"] for r in rows] == ["2", "4", "6"]
        estimates = [float(r["estimate"]) for r in rows]
        assert all(a >= b for a, b in zip(estimates, estimates[1:]))

    def test_bad_sweep_spec(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--tree", "cayley", "--d", "3", "--level-sweep", "5", "--seed", "1"])
        assert exc.value.code == 2


class TestGwCommand:
    def test_report(self, capsys):
        code, out = run_cli(
            ["gw", "4", "0.9", "--replicas", "2000", "--seed", "9", "--format", "json"],
            capsys,
        )
        doc = json.loads(out)
        assert 0.6 < doc["estimate"] < 0.9
        assert doc["method"] == "wilson"


class TestPlumbing:
    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("RUMORLAB_SEED", "4242")
        _, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "3", "--format", "json"], capsys)
        assert json.loads(out)["manifest"]["seed"] == 4242

    def test_seed_always_echoed(self, capsys):
        _, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "3"], capsys)
        assert "seed" in manifest_of(out)

    def test_csv_has_lf_endings_and_header(self, capsys):
        _, out = run_cli(["pc-table", "--d-min", "3", "--d-max", "4"], capsys)
        assert "\r" not in out
        header = [ln for ln in out.splitlines() if not ln.startswith("#")][0]
        assert header.split(",")[0] == "d"

    def test_numeric_fault_exit_code(self, capsys, monkeypatch):
        import rumorlab.cli as cli_mod

        def boom(*a, **k):
            raise NumericFault("synthetic fault")

        monkeypatch.setattr(cli_mod.thresholds, "psi_root", boom)
        code = main(["psi", "3", "1.0", "--seed", "1"])
        assert code == 3
