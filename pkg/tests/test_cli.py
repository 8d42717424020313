import json

import pytest

from strata_lab.cli import main
from strata_lab.field import GF
from strata_lab.io import read_morphism

X6_FILE = {"field": {"prime": 101}, "source": [-4, 0], "target": [1, 1],
           "entries": [["X^5", "X"], ["Y^5", "Y"]]}
POINTS = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "1"], ["1", "2", "3"]]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_classify_x6(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", write(tmp_path, "x6.json", X6_FILE))
    data = json.loads(out)
    assert code == 0 and data["label"] == "X6"
    assert data["cohomology"] == {"h0m1": 2, "h1": 3, "h0omega": 6, "h1p1": 1}


def test_classify_reproducible_bytes(tmp_path, capsys):
    path = write(tmp_path, "x6.json", X6_FILE)
    assert run(capsys, "classify", path, "--seed", "4")[1] == run(capsys, "classify", path, "--seed", "4")[1]


def test_classify_degree_error(tmp_path, capsys):
    bad = {**X6_FILE, "entries": [["X^5", "X^2"], ["Y^5", "Y"]]}
    code, _, err = run(capsys, "classify", write(tmp_path, "bad.json", bad))
    assert code == 2 and "cell (1,2)" in err


@pytest.mark.parametrize("text", ["{", "[]", '{"field": {"prime": 101}}'])
def test_classify_malformed(tmp_path, capsys, text):
    path = tmp_path / "m.json"
    path.write_text(text)
    assert run(capsys, "classify", str(path))[0] == 2


def test_field_mismatch(tmp_path, capsys):
    code, _, err = run(capsys, "classify", write(tmp_path, "x6.json", X6_FILE), "--field-prime", "7")
    assert code == 2 and "mismatch" in err


def test_cohom(tmp_path, capsys):
    code, out, _ = run(capsys, "cohom", write(tmp_path, "x6.json", X6_FILE))
    data = json.loads(out)
    assert code == 0
    assert [t["h0"] - t["h1"] for t in data["twists"]] == [6 * k + 2 for k in range(-2, 4)]


def test_construct_x6(tmp_path, capsys):
    out_file = tmp_path / "c.json"
    code, out, _ = run(capsys, "construct", "x6", "--point", "0,0,1", "--seed", "7", "--out", str(out_file))
    data = json.loads(out)
    assert code == 0 and data["label"] == "X6" and data["det_at_point"] == "0"
    assert read_morphism(out_file, GF(101)).shape == (2, 2)


def test_construct_x4(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "x4", "--points", write(tmp_path, "p.json", POINTS))
    data = json.loads(out)
    assert code == 0 and data["label"] == "X4" and data["det_vanishes_at_points"]


def test_construct_collinear(tmp_path, capsys):
    pts = [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"], ["1", "1", "1"], ["1", "2", "3"]]
    code, _, err = run(capsys, "construct", "x4", "--points", write(tmp_path, "p.json", pts))
    assert code == 3 and "collinear" in err


def test_sample(tmp_path, capsys):
    out_dir = tmp_path / "s"
    code, out, _ = run(capsys, "sample", "X1", "--samples", "4", "--seed", "2", "--out", str(out_dir))
    assert code == 0
    files = sorted(out_dir.glob("X1_*.json"))
    assert len(files) == 4
    stats = json.loads((out_dir / "stats.json").read_text())
    assert stats["seed"] == 2 and len(stats["draws"]) == 4
    for f in files:
        assert run(capsys, "classify", str(f))[1].count('"label": "X1"') == 1
    again = tmp_path / "t"
    run(capsys, "sample", "X1", "--samples", "4", "--seed", "2", "--out", str(again))
    assert [f.read_bytes() for f in files] == [f.read_bytes() for f in sorted(again.glob("X1_*.json"))]


def test_sample_label_and_small_field(capsys):
    # an unknown label is an input error; GF(2) sampling still succeeds
    assert run(capsys, "sample", "X9")[0] == 2
    assert run(capsys, "sample", "X1", "--samples", "2", "--field-prime", "2")[0] == 0


def test_sample_rationals_rejected(capsys):
    assert run(capsys, "sample", "X0", "--field-prime", "0")[0] == 2


def test_table_and_dims(tmp_path, capsys):
    code, out, _ = run(capsys, "table", "--samples", "2", "--out", str(tmp_path))
    assert code == 0 and "| X6 | (2, 3, 6) |" in out
    lines = (tmp_path / "table.jsonl").read_text().splitlines()
    assert len(lines) == 7 and all(json.loads(l)["agrees"] for l in lines)
    code, out, _ = run(capsys, "dims", "--out", str(tmp_path))
    assert code == 0 and "| X3 | 32 |" in out
    assert (tmp_path / "dims.jsonl").exists()


def test_bad_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        main(["construct", "x5"])
    assert info.value.code == 2
