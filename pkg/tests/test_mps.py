from pathlib import Path

import pytest

from tukeydepth.engine import MipForm, MipModel
from tukeydepth.model import ParamBounds, PointSet, build_system
from tukeydepth.mps import render_mps, write_mps

DATA = Path(__file__).parent / "data"


def parse_mps(text: str):
    """Minimal reader for the subset this project writes: objective row,
    G/L rows, COLUMNS with integrality markers, RHS and BOUNDS."""

    section = None
    rows: dict[str, str] = {}
    obj_row = None
    cols: dict[str, dict[str, float]] = {}
    integers: set[str] = set()
    rhs: dict[str, float] = {}
    bounds: dict[str, list] = {}
    in_int = False
    order: list[str] = []

    for raw in text.splitlines():
        if not raw.strip():
            continue
        head = raw.split()
        if raw[0] not in " \t":
            section = head[0]
            continue
        if section == "ROWS":
            sense, name = head
            if sense == "N":
                obj_row = name
            else:
                rows[name] = sense
        elif section == "COLUMNS":
            if len(head) >= 3 and head[1] == "'MARKER'":
                in_int = head[2] == "'INTORG'"
                continue
            col = head[0]
            if col not in cols:
                cols[col] = {}
                order.append(col)
                if in_int:
                    integers.add(col)
            for rname, value in zip(head[1::2], head[2::2]):
                cols[col][rname] = float(value)
        elif section == "RHS":
            for rname, value in zip(head[1::2], head[2::2]):
                rhs[rname] = float(value)
        elif section == "BOUNDS":
            kind, _, col = head[:3]
            value = float(head[3]) if len(head) > 3 else None
            bounds.setdefault(col, []).append((kind, value))
    return {"obj_row": obj_row, "rows": rows, "cols": cols, "order": order,
            "integers": integers, "rhs": rhs, "bounds": bounds}


@pytest.fixture
def simplex_mip(simplex_sys):
    return MipModel(simplex_sys, ParamBounds.for_system(simplex_sys),
                    MipForm.DEPTH)


def test_golden_file_match(simplex_mip):
    golden = (DATA / "triangle_depth.mps").read_text()
    assert render_mps(simplex_mip) == golden


def test_deterministic_column_order(simplex_mip):
    parsed = parse_mps(render_mps(simplex_mip))
    assert parsed["order"] == ["X1", "X2", "S1", "S2", "S3"]
    assert parsed["integers"] == {"S1", "S2", "S3"}
    assert parsed["rows"] == {"R1": "G", "R2": "G", "R3": "G"}


def test_roundtrip_values_exact(simplex_mip):
    parsed = parse_mps(render_mps(simplex_mip))
    sys_ = simplex_mip.sys
    M = simplex_mip.bounds.bigM
    for i in range(sys_.dim):
        for j in range(sys_.n_rows):
            v = sys_.rows[j, i]
            got = parsed["cols"][f"X{i+1}"].get(f"R{j+1}", 0.0)
            assert got == v, "values must round-trip bit-exactly"
    for j in range(sys_.n_rows):
        assert parsed["cols"][f"S{j+1}"][f"R{j+1}"] == M
        assert parsed["cols"][f"S{j+1}"]["COST"] == float(sys_.weights[j])
        assert parsed["rhs"][f"R{j+1}"] == simplex_mip.bounds.epsilon
    for i in range(sys_.dim):
        kinds = dict(parsed["bounds"][f"X{i+1}"])
        assert kinds["LO"] == -simplex_mip.bounds.c
        assert kinds["UP"] == simplex_mip.bounds.c


def test_guess_form_structure(simplex_sys):
    mip = MipModel(simplex_sys, ParamBounds.for_system(simplex_sys),
                   MipForm.GUESS, guess=2)
    parsed = parse_mps(render_mps(mip))
    assert parsed["rows"]["CARD"] == "L"
    assert parsed["rhs"]["CARD"] == 2.0
    assert parsed["order"][-1] == "EPS"
    assert parsed["cols"]["EPS"]["COST"] == -1.0
    assert all(parsed["cols"]["EPS"][f"R{j+1}"] == -1.0 for j in range(3))
    assert dict(parsed["bounds"]["EPS"])["UP"] == mip.bounds.bigM
    for j in range(3):
        assert parsed["cols"][f"S{j+1}"]["CARD"] == float(
            simplex_sys.weights[j])
        assert "COST" not in parsed["cols"][f"S{j+1}"]


def test_weighted_objective_coefficients():
    pts = [[1, 0]] * 3 + [[0, 1]] * 2 + [[-1, -1]]
    sys_ = build_system(PointSet(2, pts, [0, 0]))
    mip = MipModel(sys_, ParamBounds.for_system(sys_), MipForm.DEPTH)
    parsed = parse_mps(render_mps(mip))
    assert parsed["cols"]["S1"]["COST"] == 3.0
    assert parsed["cols"]["S2"]["COST"] == 2.0
    assert parsed["cols"]["S3"]["COST"] == 1.0


def test_write_mps_file(tmp_path, simplex_mip):
    target = tmp_path / "out.mps"
    write_mps(simplex_mip, target)
    assert target.read_text() == render_mps(simplex_mip)
    assert target.read_text().endswith("ENDATA\n")
