import json

import numpy as np
import pandas as pd
import pytest

from ellint.cli import main, parse_args, parse_complex, parse_range
from ellint.data import banana, self_loop, single_edge, star
from ellint.data.families import EXAMPLES_DIR
from ellint.engine import banana2_closed_form
from ellint.exceptions import ValidationError
from ellint.graphs import write_graph_file
from ellint.modular import eisenstein


@pytest.fixture
def graph_file(tmp_path):
    def write(g, name="g.json"):
        target = tmp_path / name
        write_graph_file(g, target)
        return str(target)

    return write


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "text,expected",
    [("i", 1j), ("0.2+1.1i", 0.2 + 1.1j), ("0.2 + 1.1i", 0.2 + 1.1j), ("-0.5+2I", -0.5 + 2j)],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValidationError):
        parse_complex("one")


def test_parse_range():
    np.testing.assert_array_almost_equal(parse_range("0:1:3"), [0, 0.5, 1])
    np.testing.assert_array_almost_equal(parse_range("2.5"), [2.5])
    with pytest.raises(ValidationError):
        parse_range("0:1")


def test_parse_args_builds_config():
    config = parse_args(
        ["eval", "--graph", "g.json", "--tau", "0.2+1.1i", "--eps-schedule", "1e-2,5e-3"]
    )
    assert config.tau == 0.2 + 1.1j
    ctl = config.quadrature_control()
    assert tuple(ctl.eps_schedule) == (1e-2, 5e-3)
    assert ctl.L == 1e3


def test_eval_banana2(capsys):
    status = main(["eval", "--graph", str(EXAMPLES_DIR / "banana2.json"), "--tau", "0.2+1.1i"])
    assert status == 0
    payload = _json_out(capsys)
    value = complex(payload["value"]["re"], payload["value"]["im"])
    assert value == pytest.approx(banana2_closed_form(0.2 + 1.1j), rel=1e-8)
    assert payload["method"] == "regulated-extrapolated"
    assert payload["params"]["run"]["command"] == "eval"
    assert payload["params"]["tau"] == {"re": 0.2, "im": 1.1}


def test_eval_tree_to_file(graph_file, tmp_path):
    target = tmp_path / "out.json"
    assert main(["eval", "--graph", graph_file(single_edge()), "--output", str(target)]) == 0
    payload = json.loads(target.read_text())
    assert payload["value"] == {"re": 0.0, "im": 0.0}


def test_polys_triangle(capsys):
    assert main(["polys", "--graph", str(EXAMPLES_DIR / "triangle.json")]) == 0
    payload = _json_out(capsys)
    assert payload["det"] == pytest.approx(3.0)
    assert payload["tree_polynomial"] == pytest.approx(3.0)
    assert payload["trees"] == [[0, 1], [0, 2], [1, 2]]
    assert payload["base"] == "c"
    assert len(payload["cuts"]) == 2


def test_polys_with_times(graph_file, capsys):
    assert main(["polys", "--graph", graph_file(banana(2)), "--t", "1,2"]) == 0
    payload = _json_out(capsys)
    assert payload["det"] == pytest.approx(1.5)
    assert payload["tree_polynomial"] == pytest.approx(3.0)


def test_selfloop(capsys):
    assert main(["selfloop", "--n", "2", "--tau", "0.3+0.8i"]) == 0
    payload = _json_out(capsys)
    value = complex(payload["value"]["re"], payload["value"]["im"])
    assert value == pytest.approx(np.pi**3 / 30 * eisenstein(4, 0.3 + 0.8j), rel=1e-10)


def test_a_const(capsys):
    assert main(["a-const", "--n0", "0", "--ns", "0"]) == 0
    payload = _json_out(capsys)
    assert payload["value"] == "1/12"
    assert payload["exact"] is True


def test_check_poisson(capsys):
    assert main(["check-poisson", "--a", "0.7", "--L", "0.5"]) == 0
    assert _json_out(capsys)["residual"] < 1e-12


def test_check_modularity_self_loop(graph_file, capsys):
    path = graph_file(self_loop(2))
    argv = ["check-modularity", "--graph", path, "--gamma", "0,-1,1,0", "--tau", "0.2+1.1i"]
    assert main(argv) == 0
    payload = _json_out(capsys)
    assert payload["residual"] < 1e-9
    assert payload["params"]["gamma"] == [0, -1, 1, 0]


def test_scan_csv(graph_file, tmp_path):
    target = tmp_path / "scan.csv"
    argv = [
        "scan", "--graph", graph_file(single_edge()), "--re", "0:0.2:2", "--im", "1:1.5:2",
        "--format", "csv", "--output", str(target),
    ]
    assert main(argv) == 0
    frame = pd.read_csv(target)
    assert list(frame.columns) == ["x", "y", "re", "im", "err"]
    assert len(frame) == 4
    np.testing.assert_array_equal(frame["re"], 0.0)
    params = json.loads((tmp_path / "scan.csv.params.json").read_text())
    assert params["run"]["command"] == "scan"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--graph", "does-not-exist.json"],
        ["eval", "--graph", str(EXAMPLES_DIR / "triangle.json"), "--tau", "0.1-1i"],
        ["eval", "--graph", str(EXAMPLES_DIR / "triangle.json"), "--method", "excised"],
        ["check-transform", "--gamma", "1,1,1,1"],
        ["eval", "--graph", str(EXAMPLES_DIR / "triangle.json"), "--eps-schedule", "1e-3,1e-2"],
        ["a-const", "--ns", "0,x"],
        ["frobnicate"],
    ],
)
def test_invalid_input_exits_with_2(argv, capsys):
    assert main(argv) == 2


def test_numerical_failure_exits_with_3(graph_file, capsys):
    assert main(["eval", "--graph", graph_file(star(4))]) == 3
    assert "numerical failure" in capsys.readouterr().err
