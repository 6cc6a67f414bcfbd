import json
import math

import numpy as np
import pytest

from tdres.io import fmt, sidecar_path, to_jsonable, write_csv, write_json
from tdres.plot import export_plot, nice_ticks


def test_fmt_round_trips():
    for v in (0.1, 1e-300, -2.5, 1 / 3):
        assert float(fmt(v)) == v
    assert fmt(np.int64(3)) == "3"
    assert fmt(math.inf) == "inf"


def test_write_csv_and_length_check(tmp_path):
    p = write_csv(tmp_path / "x.csv", ["a", "b"], [[1, 2], [0.5, 0.25]])
    assert p.read_bytes() == b"a,b\n1,0.5\n2,0.25\n"
    with pytest.raises(ValueError):
        write_csv(tmp_path / "y.csv", ["a", "b"], [[1, 2], [0.5]])


def test_write_json_sorted_and_jsonable(tmp_path):
    p = write_json(tmp_path / "x.json", {"b": np.array([1.0, math.inf]), "a": np.float64(2)})
    d = json.loads(p.read_text())
    assert d == {"a": 2.0, "b": [1.0, "inf"]}
    assert list(d) == ["a", "b"]
    assert to_jsonable(float("nan")) is None


def test_sidecar_name(tmp_path):
    assert sidecar_path(tmp_path / "trace.csv").name == "trace.csv.meta.json"


def test_nice_ticks():
    assert nice_ticks(0.0, 1.0) == pytest.approx([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    t = nice_ticks(-3.7, 12.2)
    assert t[0] >= -3.7 and t[-1] <= 12.2 and len(t) >= 3


def test_export_plot_deterministic(tmp_path):
    x = np.linspace(0, 10, 50)
    s = [("a", x, np.sin(x)), ("b & c", x, np.cos(x))]
    a = export_plot(s, tmp_path / "a.svg", title="t")
    b = export_plot(s, tmp_path / "b.svg", title="t")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    assert "b &amp; c" in (tmp_path / "a.svg").read_text()
    assert a is not None and b is not None


def test_export_plot_constant_and_empty(tmp_path):
    export_plot([("c", [0, 1], [2.0, 2.0])], tmp_path / "c.svg", markers=True)
    assert "<svg" in (tmp_path / "c.svg").read_text()
    with pytest.raises(ValueError):
        export_plot([], tmp_path / "e.svg")
    with pytest.raises(ValueError):
        export_plot([("x", [0, 1], [1.0])], tmp_path / "e.svg")
