import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latslice.bodies import (
    BodyFormatError,
    BodySpec,
    SplitMix64,
    body_from_json,
    body_to_json,
    builtin_corpus,
    random_unimodular,
    randomhull,
)
from latslice import linalg as la
from latslice.cli import REPORT_HEADER, main, report_csv

F = Fraction


def test_splitmix_reference_values():
    g = SplitMix64(0)
    assert g.next_u64() == 0xE220A8397B1DCDAF
    assert g.next_u64() == 0x6E789E6AA1B965F4


@given(st.integers(0, 2**64 - 1), st.integers(-5, 5), st.integers(0, 9))
def test_randint_in_range(seed, lo, span):
    g = SplitMix64(seed)
    assert all(lo <= g.randint(lo, lo + span) <= lo + span for _ in range(5))


def test_random_bodies_are_reproducible():
    assert randomhull(3, seed=7) == randomhull(3, seed=7)
    assert randomhull(3, seed=7) != randomhull(3, seed=8)
    T = random_unimodular(3, seed=4)
    assert abs(la.det(T)) == 1


def test_builtin_corpus_sizes():
    specs = builtin_corpus()
    dims = [s.build().dim for s in specs]
    assert sum(d <= 3 for d in dims) >= 60
    assert dims.count(4) >= 10
    assert len({s.name for s in specs}) == len(specs)


def test_body_json_round_trip():
    K = randomhull(2, seed=3)
    name, again = body_from_json(json.loads(json.dumps(body_to_json(K, "r"))))
    assert name == "r" and again == K


def test_body_from_hrep_and_generator():
    _, K = body_from_json({"hrep": {"normals": [[1, 0], [-1, 0], [0, 1], [0, -1]], "offsets": ["1/2"] * 4}})
    assert max(v[0] for v in K.vertices) == F(1, 2)
    spec = BodySpec("c", "crosspolytope", {"n": 2}, (("twist", 1),))
    _, K2 = body_from_json(spec.to_json())
    assert K2 == spec.build()


@pytest.mark.parametrize(
    "data, field",
    [
        ({"vrep": [[0, 0], [1]]}, "vrep[1]"),
        ({"vrep": [["a", 0]]}, "vrep[0]"),
        ({"hrep": {"normals": [[1, 0]]}}, "hrep.offsets"),
        ({"dim": 0, "vrep": [[0]]}, "dim"),
        ({"name": 3, "vrep": [[0]]}, "name"),
        ({}, "<root>"),
    ],
)
def test_body_errors_name_the_field(data, field):
    with pytest.raises(BodyFormatError) as exc:
        body_from_json(data)
    assert exc.value.field == field


def _gen(tmp_path, *extra):
    path = tmp_path / "body.json"
    assert main(["gen", *extra, "--out", str(path)]) == 0
    return path


def test_gen_is_deterministic(tmp_path):
    a = _gen(tmp_path, "--generator", "randomhull", "--n", "3", "--seed", "5").read_text()
    b = _gen(tmp_path, "--generator", "randomhull", "--n", "3", "--seed", "5").read_text()
    assert a == b


def test_cli_count_width_slice(tmp_path, capsys):
    body = str(_gen(tmp_path, "--generator", "crosspolytope", "--n", "3"))
    assert main(["count", "--body", body]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 7
    assert main(["width", "--body", body]) == 0
    assert json.loads(capsys.readouterr().out)["width"] == "2/1"
    assert main(["slice", "--body", body, "--mode", "koldobsky"]) == 0
    cert = json.loads(capsys.readouterr().out)["certificate"]
    assert cert["count_in_plane"] == 5 and cert["holds"]


def test_cli_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vrep": [[0, "x"]]}')
    assert main(["count", "--body", str(bad)]) == 2
    assert "vrep[0]" in capsys.readouterr().err
    assert main(["count"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_cli_verify_single_body(tmp_path, capsys):
    body = str(_gen(tmp_path, "--generator", "cube", "--n", "2"))
    out = tmp_path / "r.jsonl"
    assert main(["verify", "--body", body, "--checks", "width,gw,brunn", "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["check"] for r in rows] == ["width", "gw", "brunn"]
    assert all(r["verdict"] == "pass" for r in rows)
    assert main(["verify", "--body", body, "--checks", "nope"]) == 2


def test_report_empty_input_is_header_only():
    assert report_csv([]) == ",".join(REPORT_HEADER) + "\n"


def test_report_groups_by_dimension_and_check():
    rows = [
        {"n": 2, "check": "gw", "verdict": "pass", "lhs": "9/1", "rhs": "12/1"},
        {"n": 2, "check": "gw", "verdict": "pass", "lhs": "3/1", "rhs": "12/1"},
        {"n": 3, "check": "gw", "verdict": "inapplicable", "lhs": None, "rhs": None},
    ]
    lines = report_csv([json.dumps(r) for r in rows]).splitlines()
    assert len(lines) == 3
    assert lines[1] == "2,gw,2,2,0,0,0,0,0.750000,0.500000"
    assert lines[2] == "3,gw,1,0,0,0,1,0,,"


def test_report_rejects_garbage(tmp_path, capsys):
    p = tmp_path / "x.jsonl"
    p.write_text("not json\n")
    assert main(["report", str(p)]) == 2
