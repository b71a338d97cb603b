import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from privreg import (
    EntryOutOfRange,
    IoError,
    LabelError,
    ParseError,
    ReportTable,
    TradeoffRecord,
    emit_report,
    load_csv_dataset,
    read_report,
)
from privreg.io import report_metadata


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_three_rows(self, tmp_path):
        p = write(tmp_path, "1,0,1\n0,1,-1\n0.5,0.5,1\n")
        ds = load_csv_dataset(p, 2, {1: 1, -1: -1})
        assert (ds.n, ds.d) == (3, 2)
        np.testing.assert_array_equal(ds.y, [1, -1, 1])
        np.testing.assert_array_equal(ds.X, [[1, 0], [0, 1], [0.5, 0.5]])

    def test_scaling(self, tmp_path):
        p = write(tmp_path, "255,0.5,1\n0,-0.5,2\n100,0.25,3\n3,0.1,4\n")
        ds = load_csv_dataset(p, -1)
        assert np.abs(ds.X).max() <= 1.0
        np.testing.assert_allclose(ds.X[:, 0], [1.0, 0.0, 100 / 255, 3 / 255])
        np.testing.assert_array_equal(ds.meta["scale_factors"], [255.0, 1.0])

    def test_scaling_disabled(self, tmp_path):
        p = write(tmp_path, "255,0.5,1\n0,-0.5,2\n100,0.25,3\n")
        with pytest.raises(EntryOutOfRange):
            load_csv_dataset(p, -1, scale=False)

    def test_text_token(self, tmp_path):
        p = write(tmp_path, "1,0,1\n0,abc,-1\n0.5,0.5,1\n")
        with pytest.raises(ParseError) as exc:
            load_csv_dataset(p, 2)
        assert (exc.value.row, exc.value.column) == (2, 1)
        assert "row 2" in str(exc.value) and "column 1" in str(exc.value)

    def test_ragged_row(self, tmp_path):
        with pytest.raises(ParseError):
            load_csv_dataset(write(tmp_path, "1,0,1\n0,1\n0.5,0.5,1\n"), 2)

    def test_header_and_named_label(self, tmp_path):
        p = write(tmp_path, "a,b,label\n1,0,4\n0,1,9\n0.5,0.2,4\n")
        ds = load_csv_dataset(p, "label", {"4": 1, "9": -1})
        np.testing.assert_array_equal(ds.y, [1, -1, 1])
        assert ds.meta["feature_names"] == ["a", "b"]

    def test_unmapped_label(self, tmp_path):
        p = write(tmp_path, "1,0,4\n0,1,9\n0.5,0.2,7\n")
        with pytest.raises(LabelError):
            load_csv_dataset(p, 2, {4: 1, 9: -1})

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_csv_dataset(tmp_path / "nope.csv", 0)

    def test_max_rows_sampling(self, tmp_path, rng):
        X = rng.uniform(-1, 1, (50, 3))
        lines = [",".join(f"{v!r}" for v in row.tolist()) + f",{i}" for i, row in enumerate(X)]
        p = write(tmp_path, "\n".join(lines) + "\n")
        a = load_csv_dataset(p, -1, max_rows=20, seed=4)
        b = load_csv_dataset(p, -1, max_rows=20, seed=4)
        assert a.n == 20 and len(set(a.y.tolist())) == 20  # without replacement
        np.testing.assert_array_equal(a.y, b.y)
        assert not np.array_equal(a.y, load_csv_dataset(p, -1, max_rows=20, seed=5).y)
        np.testing.assert_array_equal(a.X, X[a.y.astype(int)])


def _table(rows=None, seed=3):
    header = ["scheme", "epsilon", "n_prime", "eta_mean"]
    return ReportTable(header, rows or [], report_metadata(seed, {"x": 1}))


class TestReports:
    def test_empty_rows(self, tmp_path):
        p = tmp_path / "r.csv"
        emit_report(_table(), p)
        lines = p.read_text().splitlines()
        assert lines[-1] == "scheme,epsilon,n_prime,eta_mean"
        assert all(line.startswith("# ") for line in lines[:-1])
        assert "# base_seed=3" in lines

    @settings(max_examples=60)
    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=5))
    def test_round_trip(self, tmp_path_factory, values):
        p = tmp_path_factory.mktemp("rt") / "r.csv"
        rows = [("random_projection", v, i if i % 2 else None, -v) for i, v in enumerate(values)]
        emit_report(_table(rows), p)
        back = read_report(p)
        for orig, got in zip(rows, back.rows):
            assert got[0] == orig[0]
            assert float(got[1]) == orig[1] and float(got[3]) == orig[3]
            assert got[2] == orig[2]

    def test_special_values_round_trip(self, tmp_path):
        p = tmp_path / "r.csv"
        emit_report(_table([("a", math.inf, 1, 1e-300), ("b", 0.1 + 0.2, 2, -0.0)]), p)
        rows = read_report(p).rows
        assert rows[0][1] == math.inf and rows[0][3] == 1e-300
        assert rows[1][1] == 0.1 + 0.2

    def test_arity_checked(self):
        with pytest.raises(ValueError):
            ReportTable(["a", "b"], [(1,)], {"base_seed": 0})

    def test_base_seed_required(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(ReportTable(["a"], [], {}), tmp_path / "r.csv")

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoError):
            emit_report(_table(), tmp_path / "missing-dir" / "r.csv")

    def test_from_records(self):
        rec = TradeoffRecord("additive_noise", "none", 0.5, 100, 5, None, 1.5, 0.1, 3, 7)
        t = ReportTable.from_records([rec], {"base_seed": 7})
        assert t.header[:3] == ["scheme", "schedule", "epsilon"]
        assert t.rows[0][5] is None

    def test_deterministic_apart_from_timestamp(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_report(_table([("x", 0.25, 3, 1.0)]), a)
        emit_report(_table([("x", 0.25, 3, 1.0)]), b)

        def strip(p):
            return [l for l in p.read_text().splitlines() if not l.startswith("# timestamp=")]

        assert strip(a) == strip(b)
        assert sum(l.startswith("# timestamp=") for l in a.read_text().splitlines()) == 1
