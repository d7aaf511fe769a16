import csv
import io
import json
from fractions import Fraction

import pytest

from wordmaps.catalog import named
from wordmaps.cli import fix_rows, main
from wordmaps.corpus import data_path, group_from_record, ingest, load_group_file, load_manifest
from wordmaps.errors import SchemaError, WordMapError
from wordmaps.survey import family, rows_to_csv, survey
from wordmaps.words import named_word


def _write(tmp_path, name, rec):
    p = tmp_path / name
    p.write_text(json.dumps(rec))
    return p


# -- ingestion ----------------------------------------------------------------------

def test_empty_directory(tmp_path):
    assert ingest(tmp_path) == []


def test_non_bijective_generator_names_index(tmp_path):
    _write(tmp_path, "bad.json", {"name": "X", "kind": "permutation", "degree": 3,
                                  "generators": [[1, 2, 0], [0, 0, 2]]})
    with pytest.raises(SchemaError) as exc:
        ingest(tmp_path)
    assert exc.value.field == "generators[1]" and "bad.json" in exc.value.path
    assert "generator 1" in str(exc.value)


@pytest.mark.parametrize("rec,fld", [
    ({"kind": "cayley", "table": [[0]]}, "name"),
    ({"name": "A", "kind": "matrix"}, "kind"),
    ({"name": "A", "kind": "permutation", "degree": 3}, "generators"),
    ({"name": "A", "kind": "permutation", "degree": 0, "generators": []}, "degree"),
    ({"name": "A", "kind": "cayley", "table": [[0, 1], [1, 1]]}, "table"),
    ({"name": "A", "kind": "cayley", "table": [[0, 1], "x"]}, "table[1]"),
    ({"name": "A", "kind": "named", "constructor": "bogus:3"}, "constructor"),
])
def test_schema_errors(rec, fld):
    with pytest.raises(SchemaError) as exc:
        group_from_record(rec, "f.json")
    assert exc.value.field == fld


def test_invalid_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        load_group_file(p)


def test_all_kinds_and_ordering(tmp_path):
    _write(tmp_path, "a.json", {"name": "S3", "kind": "permutation", "degree": 3,
                                "generators": [[1, 2, 0], [1, 0, 2]]})
    _write(tmp_path, "b.json", {"name": "C2", "kind": "cayley", "table": [[0, 1], [1, 0]]})
    _write(tmp_path, "c.json", {"name": "D16", "kind": "named", "constructor": "dihedral:16"})
    _write(tmp_path, "d.json", {"name": "B6", "kind": "named", "constructor": "cyclic:6"})
    gs = ingest(tmp_path)
    assert [(G.order, G.name) for G in gs] == [(2, "C2"), (6, "B6"), (6, "S3"), (16, "D16")]
    assert [G.name for G in ingest(tmp_path, max_order=6)] == ["C2", "B6", "S3"]


def test_corpus_count_matches_manifest(corpus100):
    man = load_manifest(data_path())
    assert len(corpus100) == man["count"] == 1048
    orders = [G.order for G in corpus100]
    assert orders == sorted(orders)


def test_order_243_corpus():
    man = load_manifest(data_path("corpus243"))
    gs = ingest(data_path("corpus243"))
    assert len(gs) == len(man["groups"]) and all(G.order == 243 for G in gs)


# -- survey -------------------------------------------------------------------------

def test_abelian_family_is_identity():
    s = survey("abelian", named_word("comm"), 40)
    assert len(s.rows) == len(family("abelian", 40))
    assert all(r.is_identity for r in s.rows) and s.max_value is None


def test_abelian_family_counts():
    # number of abelian groups of order n for n = 1..16
    expected = [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]
    got = [sum(1 for G in family("abelian", 16) if G.order == n) for n in range(1, 17)]
    assert got == expected
    assert all(G.is_abelian for G in family("abelian", 16))


def test_family_members():
    assert [G.order for G in family("dihedral", 12)] == [4, 6, 8, 10, 12]
    assert [G.order for G in family("sym", 130)] == [1, 2, 6, 24, 120]
    assert [G.order for G in family("alt", 60)] == [3, 12, 60]
    with pytest.raises(WordMapError):
        family("free", 10)


def test_row_invariants_and_summary(corpus100):
    groups = [G for G in corpus100 if G.order <= 24]
    s = survey(groups, named_word("engel2"))
    for r in s.rows:
        assert r.float == r.hits / r.total
        assert r.is_identity == (r.hits == r.total)
        assert Fraction(r.numerator, r.denominator) == Fraction(r.hits, r.total)
        assert (r.action == "") == (r.is_identity or not r.solvable)
    recomputed = max(Fraction(r.hits, r.total) for r in s.rows if r.hits != r.total)
    assert s.max_value == recomputed == Fraction(3, 4)
    assert "SmallGroup(16,7)" in s.argmax


def test_csv_byte_stable(corpus100, tmp_path):
    groups = [G for G in corpus100 if G.order <= 30]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    survey(groups, named_word("engel2"), out=a, threads=1)
    survey(groups, named_word("engel2"), out=b, threads=3)
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert len(rows) == len(groups) and rows[0]["is_identity"] == "true"


def test_survey_isolates_group_errors():
    s = survey([named("sym:3"), named("alt:5")], named_word("engel2"))
    assert len(s.rows) == 2 and s.errors == []
    assert s.rows[1].solvable is False and s.rows[1].action == ""


# -- command line -------------------------------------------------------------------

def test_cli_prob(capsys):
    assert main(["prob", "--group", "dihedral:8", "--word", "comm"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["hits"], out["total"], out["reduced"], out["float"]) == (40, 64, "5/8", 0.625)


def test_cli_prob_sampled_and_coset(capsys):
    assert main(["--seed", "3", "prob", "--group", "sym:4", "--word", "comm", "--sample", "5000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mode"] == "sampled" and out["seed"] == 3
    assert main(["prob", "--group", "sym:4", "--word", "comm", "--coset", "derived", "--reps", "0,1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mode"] == "exact" and out["total"] == 144


def test_cli_exit_codes(capsys):
    assert main(["prob", "--group", "sym:4", "--word", "metab", "--budget", "10"]) == 3
    assert main(["--budget", "10", "prob", "--group", "sym:4", "--word", "metab"]) == 3
    assert main(["prob", "--group", "bogus:1", "--word", "comm"]) == 2
    assert main(["prob", "--group", "sym:3", "--word", "[x1"]) == 2
    assert main(["badness", "--group", "dihedral:8", "--word", "engel2"]) == 2
    capsys.readouterr()


def test_cli_group_file(tmp_path, capsys):
    p = _write(tmp_path, "g.json", {"name": "S3", "kind": "permutation", "degree": 3,
                                    "generators": [[1, 2, 0], [1, 0, 2]]})
    assert main(["prob", "--group", str(p), "--word", "comm"]) == 0
    assert json.loads(capsys.readouterr().out)["reduced"] == "1/2"


def test_cli_fix(tmp_path):
    out = tmp_path / "fix.csv"
    assert main(["fix", "--q", "9", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["alpha_i", "alpha_j", "fix_count", "lemma_bound", "within_bound", "ad_image_size"]
    assert len(rows) == 16
    assert {r["within_bound"] for r in rows if r["fix_count"] == "24"} == {"false"}
    assert rows == [{k: str(v) for k, v in r.items()} for r in fix_rows(9)]


def test_cli_badness(tmp_path):
    out = tmp_path / "b.json"
    assert main(["badness", "--group", "dihedral:16", "--word", "engel2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] and rep["counts"]["BAD"] == 8
    assert all(len(b["lhs"]) == 2 for b in rep["bounds"])
    assert main(["badness", "--group", "dihedral:8", "--word", "gamma:2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["probabilities"]["2"]["reduced"] == "5/8"


def test_cli_vsmb(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["vsmb", "--word", "engel2", "--groups", "psl2:3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["verdict"] == "VSMB-supported"
    row = rep["instances"][0]
    assert {"group", "variation_id", "tuple", "verdict", "evals_used"} <= row.keys()
    capsys.readouterr()


def test_cli_survey(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["survey", "--family", "dihedral", "--word", "engel2", "--max-order", "32",
                 "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["max_non_identity"] == [3, 4] and summary["argmax"] == ["D16"]
    assert main(["survey", "--family", "dihedral", "--word", "comm", "--max-order", "12"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("group,order,word,hits,total")
    assert main(["survey", "--word", "comm"]) == 2
    capsys.readouterr()


def test_cli_survey_filters(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["survey", "--family", "sym", "--word", "metab", "--max-order", "130",
                 "--filter", "solvable,nonmetabelian", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["groups"] == 1 and summary["identity_rows"] == 0
    assert main(["survey", "--family", "alt", "--word", "comm", "--max-order", "60",
                 "--filter", "nonsolvable"]) == 0
    assert capsys.readouterr().out.count("\n") == 2
    assert main(["survey", "--family", "alt", "--word", "comm", "--filter", "odd"]) == 2


def test_rows_to_csv_header_only():
    assert rows_to_csv([]).strip() == "group,order,word,hits,total,numerator,denominator,float,is_identity,solvable,action"
