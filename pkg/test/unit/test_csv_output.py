"""Unit tests for CSV formatting and writing."""

import math

import pytest

from hybrid_cooling.csv_output import format_value, render, write_csv


class TestFormatValue:
    """Test lossless number formatting."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (math.nan, "nan"),
            (math.inf, "inf"),
            (-math.inf, "-inf"),
            (True, "1"),
            (False, "0"),
            (3, "3"),
            (None, ""),
            ("fig5a", "fig5a"),
        ],
    )
    def test_tokens(self, value, expected):
        assert format_value(value) == expected

    def test_floats_round_trip(self):
        for x in (0.1, 1.0 / 3.0, 411.3912345678901, 1.568e-4, -2.5e-300):
            assert float(format_value(x)) == x

    def test_numpy_scalars(self):
        import numpy as np

        assert format_value(np.float64(0.25)) == "0.25"


class TestRender:
    """Test comment header and row layout."""

    def test_layout(self):
        text = render(["a", "b"], [{"a": 1.5, "b": math.nan}, {"a": 2}], ["hybrid-cooling solve"])

        assert text.splitlines() == ["# hybrid-cooling solve", "a,b", "1.5,nan", "2,"]

    def test_deterministic(self):
        rows = [{"x": 0.1 * k} for k in range(10)]

        assert render(["x"], rows) == render(["x"], rows)


class TestWriteCsv:
    """Test stdout and atomic file output."""

    def test_stdout(self, capsys):
        write_csv(None, ["a"], [{"a": 1.0}])

        assert capsys.readouterr().out == "a\n1\n"

    def test_file_without_leftovers(self, tmp_path):
        out = tmp_path / "rows.csv"
        write_csv(out, ["a"], [{"a": 0.5}], ["c"])

        assert out.read_text() == "# c\na\n0.5\n"
        assert sorted(p.name for p in tmp_path.iterdir()) == ["rows.csv"]

    def test_failed_render_leaves_no_file(self, tmp_path):
        out = tmp_path / "rows.csv"

        def rows():
            yield {"a": 1.0}
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            write_csv(out, ["a"], rows())
        assert list(tmp_path.iterdir()) == []
