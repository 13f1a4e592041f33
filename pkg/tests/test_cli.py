import json
import logging
import math
import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectra.cache import CacheKey, cache_load, cache_store
from spectra.cli import EXIT_ERROR, EXIT_IMPOSSIBLE, EXIT_OK, main, run
from spectra.config import PARAM_SCHEMA, RunConfig, parse_grid
from spectra.dimension import covering_table
from spectra.errors import ConfigError

AFFINE = {"name": "affine", "ratios": {"1": "1/3", "2": "1/3"}}


class TestConfig:
    def test_defaults_filled(self):
        cfg = RunConfig("dimension-curve")
        assert cfg.params == {"t_grid": "2.0:3.5:0.1", "r_min": 1, "r_max": 12, "stable": False}

    @given(
        st.sampled_from(sorted(PARAM_SCHEMA)),
        st.integers(0, 2**31),
        st.integers(0, 500),
        st.integers(1, 16),
    )
    def test_round_trip(self, command, seed, budget, workers):
        cfg = RunConfig(command, seed=seed, budget=budget, workers=workers)
        again = RunConfig.loads(cfg.dumps())
        assert again == cfg
        assert again.config_hash() == cfg.config_hash()

    def test_infinity_survives_json(self):
        cfg = RunConfig("extract", params={"t": "inf"})
        assert cfg.params["t"] == math.inf
        assert RunConfig.loads(cfg.dumps()).params["t"] == math.inf

    def test_hash_ignores_workers_only(self):
        a = RunConfig("extract", workers=1)
        assert a.config_hash() == RunConfig("extract", workers=16).config_hash()
        assert a.config_hash() != RunConfig("extract", seed=1).config_hash()
        assert a.config_hash() != RunConfig("extract", params={"t": 3.2}).config_hash()

    @pytest.mark.parametrize(
        "data,path",
        [
            ({"command": "extract", "params": {"t": "x"}}, "params.t"),
            ({"command": "extract", "params": {"bogus": 1}}, "params.bogus"),
            ({"command": "extract", "budget": -1}, "budget"),
            ({"command": "extract", "workers": 0}, "workers"),
            ({"command": "nope"}, "command"),
            ({"command": "extract", "extra": 1}, "extra"),
            ({"command": "lagrange-sample", "params": {"alphabet": [[1], []]}}, "params.alphabet[1]"),
            ({"command": "extract", "geometry": {"name": "hyperbolic"}}, "geometry"),
            ({"command": "verify-invariants", "params": {"t_values": [2.5, "x"]}}, "params.t_values[1]"),
        ],
    )
    def test_errors_name_the_field(self, data, path):
        with pytest.raises(ConfigError) as info:
            RunConfig.from_json(data)
        assert info.value.path == path

    def test_grid(self):
        assert parse_grid("2.0:2.3:0.1") == [2.0, 2.1, 2.2, 2.3]
        assert parse_grid("3") == [3.0]
        with pytest.raises(ConfigError):
            parse_grid("3:2:0.1")


class TestCache:
    def _table(self, ts2, cf, pot):
        return covering_table(3.1, 6, ts2, cf, pot, keep_words=(6,))

    def test_store_then_load(self, tmp_path, ts2, cf, pot):
        key = CacheKey("a" * 64, 3.1, 6, 64)
        table = self._table(ts2, cf, pot)
        cache_store(key, table, tmp_path)
        assert cache_load(key, tmp_path) == table

    def test_miss_after_config_change(self, tmp_path, ts2, cf, pot):
        cache_store(CacheKey(RunConfig("extract").model_hash(), 3.1, 6, 64), self._table(ts2, cf, pot), tmp_path)
        changed = RunConfig("extract", witness_depth=5).model_hash()
        assert cache_load(CacheKey(changed, 3.1, 6, 64), tmp_path) is None
        assert cache_load(CacheKey(RunConfig("extract").model_hash(), 3.1, 6, 32), tmp_path) is None

    def test_corrupt_entry_is_a_miss(self, tmp_path, ts2, cf, pot, caplog):
        key = CacheKey("b" * 64, 3.1, 6, 64)
        path = cache_store(key, self._table(ts2, cf, pot), tmp_path)
        doc = json.loads(path.read_text())
        doc["table"]["rows"]["6"]["upper"] += 1
        path.write_text(json.dumps(doc))
        with caplog.at_level(logging.WARNING):
            assert cache_load(key, tmp_path) is None
        assert "checksum" in caplog.text
        path.write_text("{not json")
        assert cache_load(key, tmp_path) is None

    def test_interrupted_store_leaves_nothing(self, tmp_path, ts2, cf, pot, monkeypatch):
        key = CacheKey("c" * 64, 3.1, 6, 64)

        def boom(*args):
            raise KeyboardInterrupt

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(KeyboardInterrupt):
            cache_store(key, self._table(ts2, cf, pot), tmp_path)
        monkeypatch.undo()
        assert cache_load(key, tmp_path) is None
        assert os.listdir(tmp_path) == []


class TestRun:
    def test_dimension_curve_csv(self):
        cfg = RunConfig("dimension-curve", params={"t_grid": "2.0:3.5:0.1", "r_max": 10})
        env = run("dimension-curve", cfg)
        lines = [line for line in env.payload.splitlines() if not line.startswith("#")]
        assert lines[0] == "t,certified_lower,estimate,certified_upper,r_used"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 16
        for t, lo, est, up, _ in rows:
            t, lo, est, up = map(float, (t, lo, est, up))
            assert lo <= est <= up
            if t < math.sqrt(5):
                assert lo == est == up == 0.0
        uppers = [float(r[3]) for r in rows if float(r[0]) >= 2.9]
        assert uppers == sorted(uppers) and uppers[-1] > 0.3
        assert env.payload.startswith(f"# config_hash={cfg.config_hash()}")

    def test_verify_invariants_affine_all_pass(self):
        cfg = RunConfig(
            "verify-invariants", geometry=AFFINE, potential={"name": "affine_coordinate"},
            params={"depth": 6, "r_max": 6, "samples": 10},
        )
        env = run("verify-invariants", cfg)
        assert env.exit_code == EXIT_OK
        assert env.payload["all_passed"]
        assert {c["status"] for c in env.payload["checks"]} <= {"pass", "skip"}

    def test_spectrum_table_anchors(self):
        env = run("spectrum-table", RunConfig("spectrum-table", params={"max_period": 4}))
        lines = [line for line in env.payload.splitlines() if not line.startswith("#")]
        assert lines[0].split(",")[0] == "markov_value"
        values = [float(line.split(",")[0]) for line in lines[1:]]
        assert values[:3] == pytest.approx([math.sqrt(5), 2 * math.sqrt(2), math.sqrt(221) / 5], abs=1e-12)
        assert values == sorted(values)

    def test_payload_identical_across_runs_and_workers(self):
        a = run("spectrum-table", RunConfig("spectrum-table", params={"max_period": 5}))
        b = run("spectrum-table", RunConfig("spectrum-table", params={"max_period": 5}, workers=4))
        assert a.payload_text() == b.payload_text()
        assert "wall_time" not in a.payload_text()

    def test_command_mismatch(self):
        with pytest.raises(ConfigError):
            run("extract", RunConfig("spectrum-table"))

    def test_cache_does_not_change_output(self, tmp_path):
        cfg = RunConfig("dimension-curve", params={"t_grid": "3.0:3.2:0.1", "r_max": 8})
        cold = run("dimension-curve", cfg, cache_dir=tmp_path).payload_text()
        assert os.listdir(tmp_path)
        warm = run("dimension-curve", cfg, cache_dir=tmp_path).payload_text()
        uncached = run("dimension-curve", cfg, use_cache=False).payload_text()
        assert cold == warm == uncached


class TestMain:
    def test_extract_impossible_exit_code(self, capsys):
        assert main(["extract", "--t", "2.2", "--no-cache"]) == EXIT_IMPOSSIBLE
        assert "extraction impossible" in capsys.readouterr().err

    def test_config_error_exit_code(self, capsys):
        assert main(["extract", "--budget", "-3"]) == EXIT_ERROR
        assert "budget" in capsys.readouterr().err

    def test_config_file_and_overrides(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"command": "spectrum-table", "params": {"max_period": 3, "t_max": 2.9}}))
        out = tmp_path / "out.csv"
        env = tmp_path / "env.json"
        code = main(["spectrum-table", "--config", str(path), "--max-period", "4", "--out", str(out), "--envelope", str(env)])
        assert code == EXIT_OK
        expected = RunConfig("spectrum-table", params={"max_period": 4, "t_max": 2.9})
        assert out.read_text().startswith(f"# config_hash={expected.config_hash()}")
        meta = json.loads(env.read_text())
        assert meta["wall_time"] >= 0 and meta["exit_code"] == 0

    def test_lagrange_sample_with_alphabet(self, capsys):
        code = main(["lagrange-sample", "--alphabet", "[[1], [2]]", "--m", "2", "--count", "5", "--no-cache"])
        assert code == EXIT_OK
        rows = [line.split(",") for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
        assert rows[0] == ["index", "x_word", "n", "lagrange_value", "error", "error_bound_certified_upper"]
        assert len(rows) == 6
        assert all(float(r[4]) <= 1e-9 for r in rows[1:])
