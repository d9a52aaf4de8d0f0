import json

import numpy as np
import pytest

from matsharp import (
    CampaignConfig,
    ConfigError,
    InequalityReport,
    emit_report,
    load_reports,
    render_reports,
    run_campaign,
    save_matrix,
    search_counterexample,
    summarize,
)
from matsharp.campaign import CSV_COLUMNS, reevaluate_search_instance
from matsharp.cli import main as cli_main


def small_config(**overrides):
    obj = {
        "inequality-id": "main_theorem",
        "trials": 4,
        "dims": [2, 3],
        "m-values": [1, 2],
        "t-grid": [0.5],
        "r-grid": [1.0, 2.0],
        "norm-specs": ["schatten:2"],
        "root-seed": 11,
    }
    obj.update(overrides)
    return CampaignConfig.from_obj(obj)


def synthetic_report(i):
    return InequalityReport(
        inequality_id="LemmaChain",
        params={"m": 1, "n": 2, "t": 0.5, "r": 1.0, "s": 1.0,
                "norm-spec": "trace", "function-id": None, "seed": i, "trial": i},
        terms=[("left", 1.0 + i), ("right", 2.0 + i)],
        margins=[1.0],
        holds=True,
        fan_margins=[1.0],
    )


class TestConfig:
    def test_rejects_zero_trials(self):
        with pytest.raises(ConfigError):
            small_config(trials=0)

    def test_rejects_empty_grid(self):
        with pytest.raises(ConfigError):
            small_config(**{"t-grid": []})
        with pytest.raises(ConfigError):
            small_config(dims=[])

    def test_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"inequality-id": "main_theorem", "sweeps": 3})
        with pytest.raises(ConfigError):
            small_config(ensemble={"flavor": "spicy"})

    def test_rejects_missing_id_and_bad_values(self):
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"trials": 5})
        with pytest.raises(ConfigError):
            small_config(**{"output-format": "parquet"})
        with pytest.raises(ConfigError):
            small_config(relTol=0.0)
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"inequality-id": "fermat"})

    def test_bourin_uchiyama_needs_direction_and_functions(self):
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"inequality-id": "bourin_uchiyama",
                                     "functions": ["power:2"]})
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"inequality-id": "bourin_uchiyama",
                                     "direction": "convex", "functions": []})

    def test_lemma_chain_rejects_psd_ensemble(self):
        with pytest.raises(ConfigError):
            CampaignConfig.from_obj({"inequality-id": "lemma_chain",
                                     "ensemble": {"kind": "psd"}})

    def test_round_trip_exact_keys(self):
        cfg = small_config()
        obj = cfg.to_obj()
        assert set(obj) >= {"inequality-id", "trials", "dims", "m-values", "t-grid",
                            "r-grid", "s-grid", "norm-specs", "ensemble", "root-seed",
                            "relTol", "absTol", "printed-form", "output-path",
                            "output-format"}
        again = CampaignConfig.from_obj(obj)
        assert again.to_obj() == obj

    def test_id_aliases(self):
        assert small_config(**{"inequality-id": "MainTheorem"}).inequality_id == "MainTheorem"
        assert small_config(**{"inequality-id": "proof-steps"}).inequality_id == "ProofSteps"


class TestRunCampaign:
    def test_report_count_is_trials_times_grid(self):
        cfg = small_config()
        summary, reports = run_campaign(cfg)
        assert summary.total == len(reports) == cfg.trials * cfg.grid_size()
        assert summary.held + summary.violated == summary.total

    @pytest.mark.parametrize("obj,expected", [
        ({"inequality-id": "lemma_chain", "dims": [2, 3], "t-grid": [0.0, 0.5],
          "r-grid": [1.0], "s-grid": [1.0, 2.0], "norm-specs": ["trace"]}, 2 * 2 * 1 * 2),
        ({"inequality-id": "audenaert", "dims": [2], "m-values": [1, 2, 3],
          "norm-specs": ["trace", "operator"]}, 1 * 3 * 2),
        ({"inequality-id": "bourin_uchiyama", "dims": [2], "m-values": [2],
          "functions": ["power:2", "expm1"], "direction": "convex",
          "norm-specs": ["trace"]}, 1 * 1 * 2),
        ({"inequality-id": "proof_steps", "dims": [2], "m-values": [1, 2],
          "t-grid": [0.5], "r-grid": [1.0, 2.0], "norm-specs": ["kyfan:1"]}, 2 * 2),
    ])
    def test_grid_product_per_inequality(self, obj, expected):
        cfg = CampaignConfig.from_obj(dict(obj, trials=2, **{"root-seed": 4}))
        summary, reports = run_campaign(cfg)
        assert cfg.grid_size() == expected
        assert summary.total == 2 * expected

    def test_identical_configs_identical_output(self):
        s1, r1 = run_campaign(small_config())
        s2, r2 = run_campaign(small_config())
        assert render_reports(r1, "json") == render_reports(r2, "json")
        assert (s1.total, s1.held, s1.violated, s1.min_margin, s1.min_margin_params) == \
               (s2.total, s2.held, s2.violated, s2.min_margin, s2.min_margin_params)

    def test_summary_integrity_from_stream(self):
        summary, reports = run_campaign(small_config())
        recomputed = summarize(reports)
        assert recomputed.total == summary.total
        assert recomputed.held == summary.held
        assert recomputed.violated == summary.violated
        assert recomputed.min_margin == summary.min_margin

    def test_trials_vary_inputs(self):
        _, reports = run_campaign(small_config(trials=2))
        seeds = {r.params["seed"] for r in reports}
        assert len(seeds) == 2 * 4  # trials x (dims x m-values)

    def test_bourin_uchiyama_campaign(self):
        cfg = CampaignConfig.from_obj({
            "inequality-id": "bourin_uchiyama", "trials": 3, "dims": [2],
            "m-values": [2], "functions": ["power:2", "expm1"],
            "direction": "convex", "norm-specs": ["trace"], "root-seed": 1})
        summary, reports = run_campaign(cfg)
        assert summary.total == 3 * 2
        assert summary.violated == 0
        assert {r.params["function-id"] for r in reports} == {"power:2", "expm1"}

    def test_psd_campaign_records_epsilon(self):
        cfg = small_config(ensemble={"kind": "psd"}, trials=2)
        _, reports = run_campaign(cfg)
        assert all(r.regularization_epsilon is not None for r in reports)
        assert all(np.isfinite(min(r.margins)) for r in reports)


class TestConcurrency:
    def test_checks_are_pure_under_threads(self):
        # Pure functions on immutable values: concurrent evaluation of the
        # same instance must reproduce the sequential report bit for bit.
        from concurrent.futures import ThreadPoolExecutor

        cfg = small_config()
        point = next(iter(cfg.grid_points()))
        from matsharp.campaign import _build_inputs, run_check
        a_list, b_list = _build_inputs(cfg, point["n"], point["m"], 77)
        baseline = run_check(cfg, point, a_list, b_list, seed=77)
        with ThreadPoolExecutor(max_workers=4) as pool:
            futures = [pool.submit(run_check, cfg, point, a_list, b_list, seed=77)
                       for _ in range(8)]
            results = [f.result() for f in futures]
        assert all(r == baseline for r in results)


class TestEmitReport:
    def test_empty_stream_csv_has_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_report([], "csv", path)
        lines = path.read_text().splitlines()
        assert lines == [",".join(CSV_COLUMNS)]

    def test_json_line_round_trip(self, tmp_path):
        path = tmp_path / "one.json"
        report = synthetic_report(0)
        emit_report([report], "json", path)
        assert load_reports(path) == [report]

    def test_thousand_report_csv_row_count(self, tmp_path):
        path = tmp_path / "big.csv"
        emit_report([synthetic_report(i) for i in range(1000)], "csv", path)
        assert len(path.read_text().splitlines()) == 1001

    def test_unwritable_path_has_context(self, tmp_path):
        with pytest.raises(OSError, match="no/such/dir"):
            emit_report([], "csv", tmp_path / "no" / "such" / "dir" / "x.csv")


class TestSearch:
    def test_scalar_target_stays_at_equality(self):
        # 1x1 inputs make every chain term identical: the descent must
        # keep the margin at zero and report no violation.
        cfg = CampaignConfig.from_obj({
            "inequality-id": "lemma_chain", "dims": [1], "t-grid": [0.5],
            "r-grid": [2.0], "s-grid": [1.0], "norm-specs": ["trace"],
            "root-seed": 3})
        report = search_counterexample(cfg, 120)
        assert not report.violation_found
        assert abs(report.best_margin) <= 1e-9

    def test_finds_printed_form_violation_off_half(self):
        cfg = CampaignConfig.from_obj({
            "inequality-id": "main_theorem", "dims": [3], "m-values": [2],
            "t-grid": [0.1], "r-grid": [1.0], "norm-specs": ["schatten:2"],
            "root-seed": 7})
        report = search_counterexample(cfg, 200)
        assert report.violation_found
        assert report.best_margin < 0

    def test_theorem_region_stays_clean(self):
        # Printed form at t = 1/2 is proven; descent must not manufacture
        # a violation there.
        cfg = CampaignConfig.from_obj({
            "inequality-id": "main_theorem", "dims": [2], "m-values": [2],
            "t-grid": [0.5], "r-grid": [2.0], "norm-specs": ["schatten:2"],
            "root-seed": 23})
        report = search_counterexample(cfg, 400)
        assert not report.violation_found

    def test_soundness_reproduces_margin(self):
        cfg = CampaignConfig.from_obj({
            "inequality-id": "main_theorem", "dims": [2], "m-values": [1],
            "t-grid": [0.25], "r-grid": [2.0], "norm-specs": ["schatten:2"],
            "root-seed": 19})
        report = search_counterexample(cfg, 150)
        margin, _ = reevaluate_search_instance(cfg, report)
        assert abs(margin - report.best_margin) <= 1e-12

    def test_json_serializable(self):
        cfg = CampaignConfig.from_obj({
            "inequality-id": "lemma_chain", "dims": [2], "t-grid": [0.5],
            "r-grid": [1.0], "s-grid": [1.0], "norm-specs": ["trace"],
            "root-seed": 5})
        report = search_counterexample(cfg, 30)
        parsed = json.loads(report.to_json())
        assert parsed["steps"] == 30
        assert "best-instance" in parsed and "a-list" in parsed["best-instance"]

    def test_rejects_multi_point_target(self):
        with pytest.raises(ConfigError):
            search_counterexample(small_config(), 10)


class TestCli:
    def test_eval_holds_exit_zero(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_matrix(a, np.diag([2.0, 3.0]))
        save_matrix(b, np.diag([1.0, 4.0]))
        code = cli_main(["eval", "--inequality", "main_theorem",
                         "--a", str(a), "--b", str(b), "--t", "0.5", "--r", "2",
                         "--norm", "schatten:1"])
        out = capsys.readouterr().out
        report = InequalityReport.from_json(out)
        assert code == 0 and report.holds

    def test_eval_violation_exit_two(self, tmp_path, capsys):
        # Printed form far from t = 1/2 with lopsided inputs violates.
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_matrix(a, np.diag([10.0, 10.0]))
        save_matrix(b, np.diag([1e-4, 1e-4]))
        code = cli_main(["eval", "--inequality", "main_theorem",
                         "--a", str(a), "--b", str(b), "--t", "0.05", "--r", "1",
                         "--norm", "trace"])
        report = InequalityReport.from_json(capsys.readouterr().out)
        assert code == 2 and not report.holds

    def test_campaign_writes_reports_and_summary(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        out_path = tmp_path / "reports.json"
        cfg_path.write_text(json.dumps({
            "inequality-id": "audenaert", "trials": 2, "dims": [2],
            "m-values": [2], "norm-specs": ["trace"], "root-seed": 5,
            "ensemble": {"kind": "commuting"}}))
        code = cli_main(["campaign", "--config", str(cfg_path), "--out", str(out_path)])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        reports = load_reports(out_path)
        assert summary["total"] == len(reports) == 2 * 1 * 1 * 1

    def test_campaign_flag_overrides(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        out_path = tmp_path / "r.csv"
        cfg_path.write_text(json.dumps({
            "inequality-id": "audenaert", "trials": 9, "dims": [2, 3],
            "m-values": [1], "norm-specs": ["trace"], "root-seed": 5,
            "ensemble": {"kind": "commuting"}}))
        code = cli_main(["campaign", "--config", str(cfg_path), "--trials", "2",
                         "--dim", "2", "--format", "csv", "--out", str(out_path)])
        assert code == 0
        rows = out_path.read_text().splitlines()
        assert rows[0] == ",".join(CSV_COLUMNS)
        assert len(rows) == 1 + 2

    def test_bad_config_exit_one(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"inequality-id": "main_theorem", "trials": 0}))
        assert cli_main(["campaign", "--config", str(cfg_path)]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_config_file_exit_one(self, capsys):
        assert cli_main(["campaign", "--config", "/nonexistent/cfg.json"]) == 1

    def test_eval_bourin_uchiyama_needs_function(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        save_matrix(a, np.eye(2))
        code = cli_main(["eval", "--inequality", "bourin_uchiyama", "--a", str(a)])
        assert code == 1
        assert "function" in capsys.readouterr().err

    def test_search_subcommand(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        out_path = tmp_path / "search.json"
        cfg_path.write_text(json.dumps({
            "inequality-id": "lemma_chain", "dims": [2], "t-grid": [0.5],
            "r-grid": [1.0], "s-grid": [1.0], "norm-specs": ["trace"],
            "root-seed": 5, "output-path": str(out_path)}))
        code = cli_main(["search", "--config", str(cfg_path), "--steps", "25"])
        assert code == 0
        saved = json.loads(out_path.read_text())
        assert saved["steps"] == 25

    def test_eval_stdout_stream_campaign(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "inequality-id": "audenaert", "trials": 1, "dims": [2],
            "m-values": [1], "norm-specs": ["trace"], "root-seed": 1,
            "ensemble": {"kind": "commuting"}}))
        code = cli_main(["campaign", "--config", str(cfg_path)])
        captured = capsys.readouterr()
        assert code == 0
        lines = [l for l in captured.out.splitlines() if l.strip()]
        assert len(lines) == 1
        InequalityReport.from_json(lines[0])
