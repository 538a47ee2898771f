import json
import random

import pytest

from fobce.bce import build_index, eliminate, eliminate_pure, pure_predicates
from fobce.blocked import APPROX, EQ, NOEQ, is_blocked
from fobce.core import EQUALITY, Formula, pred
from fobce.tptp import parse_formula, parse_problem

from randgen import formula_with_functions, seeded, small_formula

AGATHA = "l(a)\nl(b)\nl(c)\n~l(X) | X = a | X = b | X = c"


def test_agatha_is_emptied():
    out, report = eliminate(parse_formula(AGATHA), EQ)
    assert len(out) == 0
    assert len(report.eliminated) == 4 and report.percentage == 100.0


def test_mirrored_pair_cascade():
    f = parse_formula("p(X,Y) | ~p(Y,X) | q(b)\n~p(a,b) | p(b,a)")
    out, report = eliminate(f)
    assert len(out) == 0 and report.mode == NOEQ


def test_duplicated_literals_are_not_blocked():
    f = parse_formula("p | p\n~p | ~p")
    out, _ = eliminate(f)
    assert out.keys() == f.keys()


def test_symmetric_pair_survives():
    f = parse_formula("p(X,Y) | p(Y,X)\n~p(U,V) | ~p(V,U)")
    out, report = eliminate(f)
    assert len(out) == 2 and not report.eliminated


def test_index_counts():
    idx = build_index(parse_formula(AGATHA))
    l = pred("l", 1)
    assert idx.count(l, True) == 3
    assert idx.count(l, False) == 1
    assert idx.count(EQUALITY, True) == 3


def test_index_small_cases():
    assert build_index(Formula()).as_dict() == {}
    idx = build_index(parse_formula("p(X)"))
    assert idx.as_dict() == {(pred("p", 1), True): {(0, 0)}}


def test_pure_cascade():
    out, report = eliminate_pure(parse_formula("p(a) | q\n~q"))
    assert len(out) == 0
    assert report.eliminated_ids == [0, 1]
    assert [e.reason for e in report.eliminated] == ["pure", "pure"]


def test_pure_nothing_to_do():
    f = parse_formula("p\n~p")
    assert eliminate_pure(f)[0].keys() == f.keys()
    assert len(eliminate_pure(Formula())[0]) == 0


def test_pure_predicates_ignore_equality():
    f = parse_formula("a = b | p\n~p | q")
    assert pure_predicates(f) == {pred("q", 0)}


def test_auto_mode_and_unsafe_override():
    f = parse_formula("a = b\n~p(b)\np(a)")
    assert eliminate(f)[1].mode == EQ
    with pytest.raises(ValueError):
        eliminate(f, NOEQ)
    out, report = eliminate(f, NOEQ, unsafe_noeq=True)
    assert report.mode == NOEQ and 2 in report.eliminated_ids


def test_eliminated_clauses_were_blocked_when_removed():
    rng = seeded(4)
    for _ in range(100):
        f = formula_with_functions(rng)
        out, report = eliminate(f)
        current = f.copy()
        for e in report.eliminated:
            assert is_blocked(current, current.get(e.clause_id), e.literal_pos, report.mode)
            current.remove(e.clause_id)
        assert current.keys() == out.keys()


def test_fixpoint_reached():
    rng = seeded(8)
    for _ in range(100):
        f = small_formula(rng, equality=rng.random() < 0.5)
        out, report = eliminate(f)
        for c in out.clauses():
            for pos, l in enumerate(c.literals):
                if l.is_equality:
                    continue
                assert not is_blocked(out, c, pos, report.mode)


def test_conservation():
    rng = seeded(9)
    for _ in range(100):
        f = formula_with_functions(rng)
        out, report = eliminate(f)
        assert report.clauses_in == report.clauses_out + len(report.eliminated)
        assert sorted(out.ids() + report.eliminated_ids) == f.ids()
        assert len(set(report.eliminated_ids)) == len(report.eliminated_ids)


def test_custom_order_same_result():
    rng = seeded(10)
    for _ in range(50):
        f = formula_with_functions(rng)
        base = eliminate(f)[0].keys()
        r = random.Random(rng.random())
        keys = {}
        order = lambda cid, pos, prio: keys.setdefault((cid, pos), r.random())
        assert eliminate(f, order=order)[0].keys() == base


def test_tautology_deletion():
    f = parse_formula("p(a) | ~p(a) | q\n~q | r(b)\n~r(b)")
    out, report = eliminate(f, delete_tautologies=True)
    assert report.eliminated[0].reason == "tautology"


def test_time_limit_stops_early():
    f = formula_with_functions(seeded(12), max_clauses=8)
    out, report = eliminate(f, time_limit=-1.0)
    assert report.timed_out and len(out) == len(f)


def test_reports():
    p = parse_problem(
        "cnf(l1, axiom, l(a)). cnf(l2, axiom, l(b)). cnf(l3, axiom, l(c)).\n"
        "cnf(only, axiom, ~l(X) | X = a | X = b | X = c)."
    )
    f = p.formula()
    _, report = eliminate(f)
    doc = json.loads(report.to_json(f, p.names()))
    assert doc["clauses_in"] == 4 and doc["clauses_out"] == 0
    assert [e["clause"] for e in doc["eliminations"]] == ["l1", "l2", "l3", "only"]
    assert doc["eliminations"][3]["literal"] == "~l(X0)"
    text = report.to_text(f, p.names())
    assert "eliminated 4 (100.00%)" in text


def test_approx_strategy_runs():
    out, report = eliminate(parse_formula(AGATHA), strategy=APPROX)
    assert report.strategy == APPROX and len(out) == 0
    out, _ = eliminate(parse_formula(AGATHA), validity=APPROX)
    assert len(out) == 0


def test_bad_strategy():
    with pytest.raises(ValueError):
        eliminate(Formula(), strategy="fast")
