import json

import pytest

from symbidisc.config import RunConfig


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.tol == 1e-6 and cfg.grid0 == 1024

    def test_positive_tolerance_enforced(self):
        with pytest.raises(ValueError):
            RunConfig(tol=0.0)

    def test_grid_minima_enforced(self):
        with pytest.raises(ValueError):
            RunConfig(grid0=8)

    def test_env_thread_cap(self, monkeypatch):
        monkeypatch.setenv("GAMMA_INTERP_THREADS", "3")
        assert RunConfig().threads == 3
        monkeypatch.setenv("GAMMA_INTERP_THREADS", "junk")
        assert RunConfig().threads == 1

    def test_from_file_roundtrip(self, tmp_path):
        cfg = RunConfig(tol=1e-7, seed=5)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        again = RunConfig.from_file(path)
        assert again.tol == 1e-7 and again.seed == 5

    def test_unknown_keys_ignored(self):
        cfg = RunConfig.from_dict({"tol": 1e-5, "not_a_field": 1})
        assert cfg.tol == 1e-5

    def test_threaded_search_matches_serial(self):
        from symbidisc import families as fam
        from symbidisc.cnu import check_cnu
        data = fam.sample_data(fam.h_nu(1, 0.5), (0.2, -0.3 + 0.25j, 0.45j))
        serial = check_cnu(data, 1, RunConfig(threads=1))
        threaded = check_cnu(data, 1, RunConfig(threads=2))
        assert serial.status == threaded.status
        assert abs(serial.sup_norm - threaded.sup_norm) < 1e-12
