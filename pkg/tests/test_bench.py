import math

import numpy as np
import pytest

from stegokit import (
    ExperimentConfig,
    ResultRow,
    Scheme,
    emit_csv,
    generate_message,
    run_grid,
    run_grid_on_covers,
    save_pgm,
    synth_cover,
    trend_checks,
    ws_estimate,
)
from stegokit.bench import CSV_HEADER


class TestGenerateMessage:
    def test_empty(self):
        assert generate_message(5, 0).size == 0

    def test_deterministic(self):
        assert np.array_equal(generate_message(123, 500), generate_message(123, 500))

    def test_prefix_property(self):
        long = generate_message(9, 400)
        assert np.array_equal(generate_message(9, 150), long[:150])

    def test_ones_fraction(self):
        bits = generate_message(2024, 10**5)
        assert abs(bits.mean() - 0.5) < 0.01

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            generate_message(1, -1)
        with pytest.raises(ValueError):
            generate_message(-1, 10)


class TestSynthCover:
    @pytest.mark.parametrize("kind", ["smooth", "uniform"])
    def test_deterministic(self, kind):
        a = synth_cover(kind, 40, 30, 7)
        b = synth_cover(kind, 40, 30, 7)
        assert a == b
        assert a != synth_cover(kind, 40, 30, 8)

    def test_uniform_mean(self):
        img = synth_cover("uniform", 512, 512, 3)
        assert abs(img.pixels.mean() - 127.5) < 1.0

    def test_smooth_perturbation_bounded(self):
        img = synth_cover("smooth", 128, 128, 11)
        y, x = np.mgrid[0:128, 0:128].astype(float)
        gradient = (x / 127 + y / 127) / 2 * 255
        assert np.abs(img.pixels.astype(float) - gradient).max() <= 8.0

    def test_smooth_predictor_accuracy(self):
        estimates = [ws_estimate(synth_cover("smooth", 256, 256, 40 + i)).estimate for i in range(4)]
        assert abs(np.mean(estimates)) < 0.05

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            synth_cover("noisy", 8, 8, 1)

    def test_bad_dimensions(self):
        with pytest.raises(ValueError):
            synth_cover("smooth", 0, 8, 1)


class TestExperimentConfig:
    def test_defaults_valid(self):
        cfg = ExperimentConfig()
        assert cfg.rates == (0.2, 0.4, 0.6, 0.8, 1.0)

    @pytest.mark.parametrize("rates", [(0.0,), (1.5,), (-0.2,)])
    def test_bad_rates(self, rates):
        with pytest.raises(ValueError, match="rates"):
            ExperimentConfig(rates=rates)

    def test_empty_rates_allowed_for_baseline_only(self):
        ExperimentConfig(rates=())

    def test_requires_schemes_and_seeds(self):
        with pytest.raises(ValueError, match="scheme"):
            ExperimentConfig(schemes=())
        with pytest.raises(ValueError, match="seed"):
            ExperimentConfig(seeds=())
        with pytest.raises(ValueError, match="steps"):
            ExperimentConfig(steps=0)


@pytest.fixture(scope="module")
def small_grid():
    covers = [(f"c{i}", synth_cover("smooth", 48, 48, 300 + i)) for i in range(2)]
    cfg = ExperimentConfig(rates=(0.5, 1.0), seeds=(1, 2), steps=10)
    return covers, cfg, run_grid_on_covers(covers, cfg)


class TestRunGrid:
    def test_row_population(self, small_grid):
        covers, cfg, rows = small_grid
        # per cover: one baseline row per scheme + schemes x rates x seeds
        assert len(rows) == 2 * (3 + 3 * 2 * 2)

    def test_baseline_rows_identical_across_schemes(self, small_grid):
        _, _, rows = small_grid
        for cover in ("c0", "c1"):
            base = [r for r in rows if r.cover == cover and r.rate == 0.0]
            assert {r.scheme for r in base} == {"lsb", "2lsb", "bpi"}
            values = {
                (r.ws_plane1, r.ws_plane2, r.pov_mean_pvalue, r.psnr_db) for r in base
            }
            assert len(values) == 1
            assert math.isinf(base[0].psnr_db)

    def test_deterministic_csv(self, small_grid):
        covers, cfg, rows = small_grid
        again = run_grid_on_covers(covers, cfg)
        assert emit_csv(rows) == emit_csv(again)

    def test_from_paths(self, tmp_path):
        for i in range(2):
            img = synth_cover("smooth", 32, 32, 500 + i)
            (tmp_path / f"cover{i}.pgm").write_bytes(save_pgm(img))
        cfg = ExperimentConfig(
            cover_paths=(str(tmp_path / "cover0.pgm"), str(tmp_path / "cover1.pgm")),
            rates=(1.0,),
            seeds=(1,),
            steps=5,
        )
        rows = run_grid(cfg)
        assert {r.cover for r in rows} == {"cover0", "cover1"}

    def test_unreadable_cover(self, tmp_path):
        cfg = ExperimentConfig(cover_paths=(str(tmp_path / "missing.pgm"),))
        with pytest.raises(ValueError, match="cannot load cover"):
            run_grid(cfg)

    def test_empty_cover_set(self):
        with pytest.raises(ValueError, match="empty"):
            run_grid_on_covers([], ExperimentConfig())


class TestEmitCsv:
    def test_empty_rows_header_only(self):
        assert emit_csv([]) == CSV_HEADER + "\n"

    def test_single_row_two_lines(self):
        row = ResultRow("a", "lsb", 1.0, 3, 0.9, 0.1, 0.5, 51.14)
        text = emit_csv([row])
        lines = text.splitlines()
        assert len(lines) == 2
        assert lines[0] == CSV_HEADER
        assert lines[1] == "a,lsb,1.0000,0.9000,0.1000,0.5000,51.1400,0.9000,0.1000"

    def test_clamped_columns(self):
        row = ResultRow("a", "bpi", 1.0, 1, -0.975, 1.3, 0.0, 46.37)
        line = emit_csv([row]).splitlines()[1]
        fields = line.split(",")
        assert fields[3] == "-0.9750"
        assert fields[7] == "0.0000"
        assert fields[4] == "1.3000"
        assert fields[8] == "1.0000"

    def test_inf_sentinel(self):
        row = ResultRow("a", "lsb", 0.0, 0, 0.0, 0.0, 0.0, math.inf)
        assert ",inf," in emit_csv([row]).splitlines()[1]

    def test_sorted_output(self):
        rows = [
            ResultRow("b", "lsb", 0.5, 2, 0, 0, 0, 1.0),
            ResultRow("a", "bpi", 1.0, 1, 0, 0, 0, 1.0),
            ResultRow("a", "bpi", 0.5, 1, 0, 0, 0, 1.0),
            ResultRow("b", "lsb", 0.5, 1, 0, 0, 0, 1.0),
        ]
        firsts = [line.split(",")[:3] for line in emit_csv(rows).splitlines()[1:]]
        assert firsts == [
            ["a", "bpi", "0.5000"],
            ["a", "bpi", "1.0000"],
            ["b", "lsb", "0.5000"],
            ["b", "lsb", "0.5000"],
        ]


class TestTrendChecks:
    def test_structure(self, small_grid):
        _, _, rows = small_grid
        checks = trend_checks(rows)
        names = {c.name for c in checks}
        assert "ws-cover-near-zero" in names
        assert "ws-lsb-linear@0.5" in names
        assert "mlsbws-bpi-plane2-full" in names
        assert "psnr-ordering-full" in names
        for check in checks:
            assert isinstance(check.passed, bool)
            assert check.detail

    def test_synthetic_rows(self):
        # hand-built rows with on-trend numbers must pass their checks
        rows = []
        for rate in (0.5, 1.0):
            rows += [
                ResultRow("c", "lsb", rate, 1, rate, 0.1 * rate, 0.95, 51.1),
                ResultRow("c", "2lsb", rate, 1, rate / 2, rate / 2, 0.9, 47.2),
                ResultRow("c", "bpi", rate, 1, -rate, rate if rate == 1 else 0.1, 0.01, 46.4),
            ]
        rows += [ResultRow("c", s, 0.0, 0, -0.01, 0.0, 0.02, math.inf) for s in ("lsb", "2lsb", "bpi")]
        checks = trend_checks(rows)
        assert checks and all(c.passed for c in checks)
