import json

import numpy as np
import pytest

from pfopt.bench import (
    CSV_HEADER,
    ConfigError,
    CurvePoint,
    ExperimentConfig,
    main,
    parse_csv,
    render_plot,
    run_experiment,
    series_means,
    write_csv,
)


def small_config(**overrides):
    base = dict(
        experiment="hypercube_l1",
        n=10,
        sigma_list=[0.0],
        T_list=[50, 100],
        seeds=[1],
        algorithms=["pfw", "pgd"],
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_valid(self):
        small_config().validate()

    def test_empty_sigma_list(self):
        with pytest.raises(ConfigError):
            small_config(sigma_list=[]).validate()

    def test_T_list_must_increase(self):
        with pytest.raises(ConfigError):
            small_config(T_list=[100, 50]).validate()
        with pytest.raises(ConfigError):
            small_config(T_list=[50, 50]).validate()

    def test_seeds_nonempty(self):
        with pytest.raises(ConfigError):
            small_config(seeds=[]).validate()

    def test_unknown_algorithm(self):
        with pytest.raises(ConfigError):
            small_config(algorithms=["newton"]).validate()

    def test_nuclear_needs_tau(self):
        with pytest.raises(ConfigError):
            small_config(experiment="nuclear_l1", m=5).validate()

    def test_num3_rejects_pgd(self):
        with pytest.raises(ConfigError):
            small_config(experiment="num3_demo", n=3).validate()

    def test_from_json_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"experiment": "hypercube_l1", "bogus": 1}))
        with pytest.raises(ConfigError):
            ExperimentConfig.from_json(path)


class TestRunExperiment:
    def test_deterministic_hypercube_cells(self):
        points = run_experiment(small_config())
        assert len(points) == 4  # 1 sigma x 2 T x 1 seed x 2 algorithms
        for p in points:
            assert p.error is not None
            assert p.error <= p.bound
            assert p.error >= -1e-9

    def test_stochastic_cells_use_stochastic_bounds(self):
        points = run_experiment(
            small_config(sigma_list=[0.5], T_list=[100], seeds=[1, 2])
        )
        n, sigma, T = 10, 0.5, 100
        G, R = np.sqrt(n), 2 * np.sqrt(n)
        B = np.sqrt(G**2 + n * sigma**2)
        for p in points:
            if p.algorithm == "pfw":
                assert p.bound == pytest.approx((B * R + 2 * G * R) / np.sqrt(T))
            else:
                assert p.bound == pytest.approx(B * R / np.sqrt(T))

    def test_nuclear_inside_has_zero_optimum(self):
        cfg = ExperimentConfig(
            experiment="nuclear_l1", n=4, m=5, tau=2.0, omega_mode="inside",
            sigma_list=[0.0], T_list=[200], seeds=[3], algorithms=["pfw", "pgd"],
        )
        for p in run_experiment(cfg):
            assert p.error is not None
            assert p.error <= p.bound

    def test_nuclear_outside_reports_value_only(self):
        cfg = ExperimentConfig(
            experiment="nuclear_l1", n=4, m=5, tau=2.0, omega_mode="outside",
            sigma_list=[0.0], T_list=[100], seeds=[3], algorithms=["pfw"],
        )
        points = run_experiment(cfg)
        assert all(p.error is None for p in points)
        assert all(np.isfinite(p.f_xbar) for p in points)

    def test_num3_demo_runs(self):
        cfg = ExperimentConfig(
            experiment="num3_demo", n=3, gamma=4.0,
            sigma_list=[0.0], T_list=[200], seeds=[1], algorithms=["pfw"],
        )
        points = run_experiment(cfg)
        assert len(points) == 1
        assert points[0].error is None

    def test_mean_error_nonincreasing_in_T(self):
        # soft monotonicity: allow one inversion, as the theorems only bound
        points = run_experiment(small_config(T_list=[50, 200, 800]))
        means = series_means(points)
        inversions = 0
        for pts in means.values():
            vals = [v for _, v, _ in pts]
            inversions += sum(1 for a, b in zip(vals, vals[1:]) if b > a + 1e-12)
        assert inversions <= 1


class TestCsv:
    def point(self, **overrides):
        base = dict(
            experiment="hypercube_l1", algorithm="pfw", n=10, m=0, sigma=0.5,
            T=100, seed=1, f_xbar=1.234567890123, error=0.5, bound=2.0,
            wallclock_ms=17.5,
        )
        base.update(overrides)
        return CurvePoint(**base)

    def test_zero_points_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv([], path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_one_point_two_lines(self, tmp_path):
        path = tmp_path / "one.csv"
        write_csv([self.point()], path)
        assert len(path.read_text().splitlines()) == 2

    def test_absent_error_is_empty_field(self, tmp_path):
        path = tmp_path / "n.csv"
        write_csv([self.point(error=None)], path)
        row = path.read_text().splitlines()[1].split(",")
        assert row[8] == ""

    def test_rows_sorted(self, tmp_path):
        pts = [
            self.point(T=200, seed=2),
            self.point(T=100, seed=1),
            self.point(algorithm="pgd", T=100, seed=1),
            self.point(T=100, seed=2),
        ]
        path = tmp_path / "s.csv"
        write_csv(pts, path)
        keys = [
            (r.split(",")[1], float(r.split(",")[4]), int(r.split(",")[5]), int(r.split(",")[6]))
            for r in path.read_text().splitlines()[1:]
        ]
        assert keys == sorted(keys)

    def test_round_trip(self, tmp_path):
        pts = [self.point(), self.point(T=200, error=None, f_xbar=np.pi)]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(pts, p1)
        parsed = parse_csv(p1)
        write_csv(parsed, p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert [q.f_xbar for q in parsed] == [
            float(f"{p.f_xbar:.12g}") for p in sorted(pts, key=lambda p: p.T)
        ]

    def test_timed_flag_keeps_measurements(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv([self.point()], path, timed=True)
        assert path.read_text().splitlines()[1].split(",")[10] == "17.5"


class TestPlot:
    def test_single_series_svg(self, tmp_path):
        pts = [
            CurvePoint("hypercube_l1", "pfw", 10, 0, 0.0, T, 1, 1.0 / T, 1.0 / T,
                       3.0 / np.sqrt(T), 0.0)
            for T in (100, 1000)
        ]
        path = tmp_path / "p.svg"
        render_plot(pts, path)
        text = path.read_text()
        assert text.startswith("<svg")
        assert text.count("<polyline") == 2  # series + bound reference

    def test_deterministic_bytes(self, tmp_path):
        pts = run_experiment(small_config())
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_plot(pts, a)
        render_plot(pts, b)
        assert a.read_bytes() == b.read_bytes()

    def test_series_means_match_hand_computation(self):
        pts = [
            CurvePoint("e", "pfw", 10, 0, 0.5, 100, s, 0.0, err, 9.0, 0.0)
            for s, err in [(1, 1.0), (2, 3.0)]
        ]
        means = series_means(pts)
        assert means[("pfw", 0.5)] == [(100, 2.0, 9.0)]

    def test_empty_points_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            render_plot([], tmp_path / "x.svg")


class TestCli:
    def write_config(self, tmp_path, **overrides):
        cfg = dict(
            experiment="hypercube_l1", n=6, sigma_list=[0.0], T_list=[50],
            seeds=[1], algorithms=["pfw"], output_dir=str(tmp_path / "out"),
        )
        cfg.update(overrides)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_list_experiments(self, capsys):
        assert main(["--list-experiments"]) == 0
        out = capsys.readouterr().out
        assert "hypercube_l1" in out and "nuclear_l1" in out

    def test_run_writes_outputs(self, tmp_path):
        cfg = self.write_config(tmp_path)
        assert main(["run", str(cfg)]) == 0
        out = tmp_path / "out"
        assert (out / "hypercube_l1.csv").exists()
        assert (out / "hypercube_l1.svg").exists()
        assert (out / "metadata.json").exists()

    def test_output_dir_override(self, tmp_path):
        cfg = self.write_config(tmp_path)
        override = tmp_path / "elsewhere"
        assert main(["run", str(cfg), "--output-dir", str(override)]) == 0
        assert (override / "hypercube_l1.csv").exists()

    def test_invalid_config_exits_2(self, tmp_path):
        cfg = self.write_config(tmp_path, sigma_list=[])
        assert main(["run", str(cfg)]) == 2

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.json")]) == 2

    def test_plot_subcommand(self, tmp_path):
        cfg = self.write_config(tmp_path)
        main(["run", str(cfg)])
        csv = tmp_path / "out" / "hypercube_l1.csv"
        svg = tmp_path / "re.svg"
        assert main(["plot", str(csv), str(svg)]) == 0
        assert svg.read_text().startswith("<svg")

    def test_no_command_exits_2(self, capsys):
        assert main([]) == 2
