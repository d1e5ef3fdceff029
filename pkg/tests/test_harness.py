import csv
import json
import os

import pytest

from weylcert.harness import main
from weylcert.spectra import Box, count_exact

SQUARE = {"type": "rectilinear", "n": 2, "boxes": [{"sides": ["1", "1"]}]}
RECT = {"type": "rectilinear", "n": 2, "boxes": [{"sides": ["2", "1/1"], "origin": ["1/2", 0]}]}
L_SHAPE = {"type": "rectilinear", "n": 2, "boxes": [{"sides": [2, 2]}],
           "removed": [{"sides": [1, 1], "origin": [1, 1]}]}
METRICS = {"type": "metrics", "n": 2, "volume": 3.14159, "surface": 6.28318, "diameter": 2,
           "width": 2, "r_in": 1, "c_lip": 1, "mar_sides": [2, 2], "convex": True}


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--n", "2")
    d = json.loads(out)
    assert code == 0 and {"omega", "c1", "c2", "c3_half_n"} <= set(d)


def test_count_and_rationals(capsys, write):
    code, out, _ = run(capsys, "count", "--domain", write("r.json", RECT), "--lambda", "100")
    # a^2/4 + b^2 < 100/pi^2 has 6 + 4 + 2 solutions
    assert code == 0 and json.loads(out)["count"] == 12 == count_exact(Box((2, 1)), 100)


def test_spectrum_csv(capsys, write, tmp_path):
    out_csv = str(tmp_path / "e.csv")
    code, _, _ = run(capsys, "spectrum", "--domain", write("s.json", SQUARE), "--lambda-max", "60",
                     "--csv", out_csv)
    rows = list(csv.reader(open(out_csv)))
    assert code == 0 and rows[0] == ["index", "eigenvalue"] and len(rows) == 4


def test_malformed_json_line_precise(capsys, write):
    code, _, err = run(capsys, "count", "--domain", write("m.json", '{"boxes": [\n  {"sides": [1, 1]\n'),
                       "--lambda", "1")
    assert code == 2 and "m.json:3:1" in err


def test_schema_violation_has_pointer(capsys, write):
    bad = {"boxes": [{"sides": ["1", "x"]}]}
    code, _, err = run(capsys, "metrics", "--domain", write("b.json", bad))
    assert code == 2 and "/boxes/0/sides/1" in err


def test_unknown_field_rejected(capsys, write):
    code, _, err = run(capsys, "metrics", "--domain", write("u.json", {**SQUARE, "colour": 1}))
    assert code == 2 and "schema violation" in err


def test_geometry_errors_exit_2(capsys, write):
    overlap = {"boxes": [{"sides": [1, 1]}, {"sides": [1, 1], "origin": ["1/2", 0]}]}
    code, _, err = run(capsys, "metrics", "--domain", write("o.json", overlap))
    assert code == 2 and "error" in err


def test_missing_file(capsys):
    assert run(capsys, "metrics", "--domain", "/nonexistent.json")[0] == 2


def test_bad_arguments_exit_2(capsys):
    assert run(capsys, "certify")[0] == 2


def test_metrics_only_flagged(capsys, write):
    path = write("m.json", METRICS)
    code, _, err = run(capsys, "count", "--domain", path, "--lambda", "10")
    assert code == 2 and "no exact spectrum" in err
    code, out, _ = run(capsys, "certify", "--domain", path, "--epsilon", "0.5")
    assert code == 2 and json.loads(out)["verdict"] == "inconclusive"


def test_certify_exit_codes(capsys, write, tmp_path):
    out_json = str(tmp_path / "c.json")
    sq = write("s.json", SQUARE)
    code, _, err = run(capsys, "certify", "--domain", sq, "--epsilon", "0.5", "--json", out_json)
    assert code == 0 and json.load(open(out_json))["verdict"] == "certified" and "certified" in err
    code, _, _ = run(capsys, "certify", "--domain", sq, "--epsilon", "0.5", "--lambda-cap", "1e4")
    assert code == 2
    assert run(capsys, "certify", "--domain", sq, "--epsilon", "1.5")[0] == 2


def test_certify_prints_assumed(capsys, write):
    two = {"boxes": [{"sides": [1, 1]}, {"sides": [1, 1], "origin": [2, 0]}]}
    code, _, err = run(capsys, "certify", "--domain", write("t.json", two), "--epsilon", "0.9",
                       "--lambda-cap", "1e4")
    assert code == 2
    assert "ASSUMED: eigenvalues at or above Lambda: epsilon-loss theorem" in err


def test_certify_artifact_deterministic(capsys, write, tmp_path):
    sq = write("s.json", SQUARE)
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    run(capsys, "certify", "--domain", sq, "--epsilon", "0.5", "--json", a, "--threads", "1")
    run(capsys, "certify", "--domain", sq, "--epsilon", "0.5", "--json", b, "--threads", "1")
    assert open(a, "rb").read() == open(b, "rb").read()


def test_lambda_eps(capsys, write):
    code, out, _ = run(capsys, "lambda-eps", "--metrics", write("m.json", METRICS), "--epsilon", "0.5",
                       "--convex")
    d = json.loads(out)
    assert code == 0 and d["convex_variant"] and d["residual"] <= 1e-10


def test_bounds_domain_and_formula(capsys, write):
    code, out, _ = run(capsys, "bounds", "--domain", write("s.json", SQUARE), "--lambda", "500")
    d = json.loads(out)
    assert code == 0
    for b in d["bounds"]:
        if b["direction"] == "upper":
            assert b["value"] >= d["count_exact"], b["theorem"]
        else:
            assert b["value"] <= d["count_exact"], b["theorem"]
    code, out, _ = run(capsys, "bounds", "--family", "improved2d", "--vol1", "1", "--len2", "1",
                       "--lambda", "33")
    assert code == 0 and json.loads(out)["valid"] is False
    assert run(capsys, "bounds", "--family", "cube", "--lambda", "3")[0] == 2


def test_whitney(capsys, write):
    code, out, _ = run(capsys, "whitney", "--domain", write("l.json", L_SHAPE), "--depth", "5", "--check")
    d = json.loads(out)
    assert code == 0 and d["checks"]["ok"] and d["count"] == sum(d["by_generation"].values())


def test_admissible(capsys, write):
    fam = write("f.json", {"n": 2, "remark_depth": 40})
    code, out, err = run(capsys, "admissible", "--family", fam, "--check", "rectangle",
                         "--base-volume", str(8 * (1 + 2 ** 0.5) * 3.141592653589793 + 0.01))
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "certified" and d["margins"]["margin"] > 0
    assert "ASSUMED" in err
    code, _, _ = run(capsys, "admissible", "--family", fam, "--check", "rectangle", "--base-volume", "1")
    assert code == 2
    cubes = write("c.json", {"n": 2, "cubes": [{"side": 1, "origin": [0, 0]},
                                               {"side": "1/2", "origin": ["1/4", "1/4"]}]})
    assert run(capsys, "admissible", "--family", cubes, "--check", "tiled", "--base-volume", "1",
               "--multiplicity", "2")[0] == 2
    code, out, _ = run(capsys, "admissible", "--family", fam, "--check", "product", "--vol-omega0", "100",
                       "--len2", "0.5")
    assert code == 0 and json.loads(out)["data"]["length_threshold"] > 0.5


def test_sweep_csv_and_determinism(capsys, write, tmp_path):
    sq = write("s.json", SQUARE)
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    code = main(["sweep", "--domain", sq, "--lambda-max", "1e4", "--bounds", "all", "--points", "40",
                 "--csv", a])
    assert code == 0
    rows = list(csv.DictReader(open(a)))
    assert list(rows[0])[:4] == ["lambda", "count_exact", "weyl_main", "r_omega"]
    meta = json.load(open(a + ".meta.json"))
    assert all(s["violations"] == 0 for s in meta["summary"].values())
    assert "uniform_upper_lipschitz" in meta["columns"]
    main(["sweep", "--domain", sq, "--lambda-max", "1e4", "--random", "25", "--seed", "3", "--csv", a,
          "--threads", "3"])
    main(["sweep", "--domain", sq, "--lambda-max", "1e4", "--random", "25", "--seed", "3", "--csv", b])
    assert open(a, "rb").read() == open(b, "rb").read()
    assert not [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")]


def test_acceptance_subset(capsys):
    code, out, _ = run(capsys, "acceptance", "--only", "1,2")
    assert code == 0 and out.count("[PASS]") == 2


def test_threads_env(monkeypatch, capsys, write):
    monkeypatch.setenv("WEYL_CERTIFY_THREADS", "2")
    code, out, _ = run(capsys, "certify", "--domain", write("s.json", SQUARE), "--epsilon", "0.5")
    assert code == 0 and json.loads(out)["work_log"]["threads"] == 2
