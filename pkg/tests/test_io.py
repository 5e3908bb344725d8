import os
import json
import pytest
import numpy as np
from src.fields import Grid, MetricField, ScalarField, VectorField, random_band_limited, random_metric
from src.io import ConfigError, load_config, load_field, save_csv, save_field, save_json

CONFIG = os.path.join(os.path.dirname(__file__), "..", "config", "config.yml")


class TestConfig:

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(str(tmp_path / "missing.yml"))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yml"
        path.write_text("")
        assert load_config(str(path)) == {}

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError, match="mapping"):
            load_config(str(path))

    def test_broken_yaml(self, tmp_path):
        path = tmp_path / "broken.yml"
        path.write_text("models: [3, 4\n")
        with pytest.raises(ConfigError, match="Cannot parse"):
            load_config(str(path))

    def test_json_loads(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"models": {"n": [3, 4]}}))
        assert load_config(str(path)) == {"models": {"n": [3, 4]}}

    def test_repository_config(self):
        params = load_config(CONFIG)
        assert params["prescribe"]["tol"] == 1e-9
        assert params["report"]["output"] == "output"


class TestWriters:

    def test_json_is_sorted(self, tmp_path):
        path = tmp_path / "nested" / "report.json"
        save_json(str(path), {"b": 1, "a": 2})
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_csv_header(self, tmp_path):
        path = tmp_path / "table.csv"
        save_csv(str(path), [{"n": 3, "value": 0.5}, {"n": 4, "value": 0.25}])
        assert path.read_text().splitlines() == ["n,value", "3,0.5", "4,0.25"]

    def test_csv_empty_rows_with_header(self, tmp_path):
        path = tmp_path / "timings.csv"
        save_csv(str(path), [], header=["check", "elapsed"])
        assert path.read_text().splitlines() == ["check,elapsed"]


class TestFields:

    @pytest.fixture(scope="class")
    def grid(self) -> Grid:
        return Grid.torus(3, 8)

    @pytest.mark.parametrize("suffix", [".json", ".npz"])
    def test_metric(self, tmp_path, grid, suffix):
        g = random_metric(grid, 0.05, 1, seed=0)
        path = str(tmp_path / f"metric{suffix}")
        save_field(path, g)
        loaded = load_field(path)
        assert isinstance(loaded, MetricField)
        assert loaded.grid == grid
        np.testing.assert_array_equal(loaded.values, g.values)

    def test_upper_vector(self, tmp_path, grid):
        X = random_band_limited(grid, "vector", 1, 1.0, seed=1, variance="upper")
        path = str(tmp_path / "X.npz")
        save_field(path, X)
        loaded = load_field(path)
        assert isinstance(loaded, VectorField)
        assert loaded.variance == "upper"

    def test_scalar_and_tensor_kinds(self, tmp_path, grid):
        for name, field in [
            ("f.json", random_band_limited(grid, "scalar", 1, 1.0, seed=2)),
            ("h.json", random_band_limited(grid, "sym2", 1, 1.0, seed=3))
        ]:
            path = str(tmp_path / name)
            save_field(path, field)
            assert type(load_field(path)) is type(field)

    def test_schema_mismatch(self, tmp_path, grid):
        path = tmp_path / "f.json"
        save_field(str(path), ScalarField.constant(grid, 1.0))
        payload = json.loads(path.read_text())
        payload["schema"] = 99
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="schema"):
            load_field(str(path))

    def test_missing(self, tmp_path):
        with pytest.raises(ValueError, match="does not exist"):
            load_field(str(tmp_path / "nothing.npz"))
