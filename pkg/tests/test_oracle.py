import itertools

import pytest

from fobce.core import Clause, Var, const, eq, fun, intern, lit, neg, neq, PREDICATE
from fobce.oracle import (
    CapacityError,
    GroundAssignment,
    GroundFormula,
    Redundancy,
    check_redundancy,
    equality_axiom_instances,
    equivalence_flip,
    flip,
    ground_instances,
    herbrand_universe,
    prop_sat,
    repair_by_flipping,
)
from fobce.tptp import parse_clause, parse_formula

from randgen import seeded

a, b, c = const("a"), const("b"), const("c")
x, y = Var("x"), Var("y")
P, Q, R = lit("p"), lit("q"), lit("r")


def test_grounding_over_single_constant():
    g = ground_instances([Clause([lit("p", x, y), lit("p", y, x)])], universe=[c])
    assert [cl.literals for cl in g.clauses] == [(lit("p", c, c), lit("p", c, c))]


def test_ground_clause_is_its_own_instance():
    g = ground_instances([Clause([lit("p", a)])])
    assert [cl.literals for cl in g.clauses] == [(lit("p", a),)]


def test_grounding_mirrored_clause():
    clause = Clause([lit("p", x, y), neg("p", y, x), lit("q", b)])
    g = ground_instances([clause], universe=[a, b])
    got = {cl.literals for cl in g.clauses}
    assert (lit("p", a, b), neg("p", b, a), lit("q", b)) in got
    assert (lit("p", b, a), neg("p", a, b), lit("q", b)) in got


def test_seed_constant_injected():
    assert herbrand_universe(set(), 1) == [const("c")]


def test_universe_depth():
    f = intern("f", "function", 1)
    assert herbrand_universe({f, a.symbol}, 2) == [a, fun("f", a), fun("f", fun("f", a))]


def test_capacity():
    with pytest.raises(CapacityError):
        ground_instances([Clause([lit("p", x, y)])], universe=[a, b, c], cap=5)


def test_axioms_unary_predicate():
    g = equality_axiom_instances({intern("p", PREDICATE, 1)}, [a, b])
    e1 = [cl for cl in g.clauses if len(cl) == 1]
    e3 = [cl for cl in g.clauses if len(cl) == 3]
    assert {cl.literals for cl in e1} == {(eq(a, a),), (eq(b, b),)}
    assert len(e3) == 4
    assert Clause([neq(a, b), neg("p", a), lit("p", b)]) in e3


def test_axioms_empty_signature():
    g = equality_axiom_instances(set(), [a])
    assert [cl.literals for cl in g.clauses] == [(eq(a, a),)]
    with pytest.raises(ValueError):
        equality_axiom_instances(set(), [])


def test_axioms_unary_function():
    f = intern("f", "function", 1)
    g = equality_axiom_instances({f}, [a, b])
    e2 = [cl for cl in g.clauses if len(cl) == 2]
    assert len(e2) == 4
    assert Clause([neq(a, b), eq(fun("f", a), fun("f", b))]) in e2


def test_prop_sat_examples():
    model = prop_sat([Clause([P, neg("q")]), Clause([neg("q"), R])])
    assert model is not None and model.satisfies_all([Clause([P, neg("q")]), Clause([neg("q"), R])])
    pcc = lit("p", c, c)
    assert prop_sat([Clause([pcc, pcc]), Clause([pcc.complement(), pcc.complement()])]) is None
    assert len(prop_sat(GroundFormula())) == 0


def test_prop_sat_truth_table():
    rng = seeded(13)
    atoms = [lit(f"a{i}") for i in range(16)]
    for _ in range(500):
        n = rng.randint(1, 11)
        used = atoms[:n]
        clauses = [
            Clause(l if rng.random() < 0.5 else l.complement() for l in rng.sample(used, rng.randint(1, min(3, n))))
            for _ in range(rng.randint(1, 4 * n))
        ]
        brute = any(
            GroundAssignment(dict(zip(used, bits))).satisfies_all(clauses)
            for bits in itertools.product([False, True], repeat=n)
        )
        model = prop_sat(clauses)
        assert (model is not None) == brute
        if model is not None:
            assert model.satisfies_all(clauses)


def test_flip_examples():
    alpha = GroundAssignment({P: True, Q: False, R: True})
    assert flip(alpha, neg("p")) == GroundAssignment({P: False, Q: False, R: True})
    assert flip(flip(alpha, Q), Q) == alpha
    with pytest.raises(KeyError):
        flip(alpha, lit("s"))
    pab, pba, qb = lit("p", a, b), lit("p", b, a), lit("q", b)
    start = GroundAssignment({pab: False, pba: True, qb: False})
    assert flip(start, pab) == GroundAssignment({pab: True, pba: True, qb: False})


def test_equivalence_flip_follows_equal_arguments():
    pa, pb = lit("p", a), lit("p", b)
    alpha = GroundAssignment({pa: True, pb: True, eq(a, b): True, eq(b, a): True})
    out = equivalence_flip(alpha, pa)
    assert not out[pa] and not out[pb]
    assert out[eq(a, b)]


def test_equivalence_flip_degenerates_to_flip():
    pa, pb = lit("p", a), lit("p", b)
    alpha = GroundAssignment({pa: True, pb: True, eq(a, b): False})
    assert equivalence_flip(alpha, pa) == flip(alpha, pa)
    with pytest.raises(ValueError):
        equivalence_flip(alpha, eq(a, b))


def test_equivalence_flip_involution():
    rng = seeded(14)
    universe = [a, b, c]
    atoms = [lit("p", t) for t in universe] + [eq(s, t) for s in universe for t in universe]
    for _ in range(200):
        alpha = GroundAssignment({at: rng.random() < 0.5 for at in atoms})
        target = lit("p", rng.choice(universe))
        assert equivalence_flip(equivalence_flip(alpha, target), target) == alpha


def test_repair_flips_both_instances():
    pab, pba, qb = lit("p", a, b), lit("p", b, a), lit("q", b)
    alpha = GroundAssignment({pab: False, pba: True, qb: False})
    first = Clause([pab, pba.complement(), qb])
    second = Clause([pba, pab.complement(), qb])
    out = repair_by_flipping(alpha, [(first, pab), (second, pba)], others=[Clause([pab.complement(), pba])])
    assert out == GroundAssignment({pab: True, pba: True, qb: False})


def test_repair_noop_and_single():
    alpha = GroundAssignment({P: True, Q: False})
    assert repair_by_flipping(alpha, [(Clause([P]), P)]) == alpha
    out = repair_by_flipping(alpha, [(Clause([Q, neg("p")]), Q)])
    assert out[Q]


def test_repair_checks_precondition():
    alpha = GroundAssignment({P: False, Q: False})
    with pytest.raises(ValueError):
        repair_by_flipping(alpha, [(Clause([Q]), Q)], others=[Clause([P])])


def test_redundancy_examples():
    symmetric = parse_formula("p(X,Y) | p(Y,X)\n~p(U,V) | ~p(V,U)")
    assert check_redundancy(symmetric, symmetric.get(0), depth=0) is Redundancy.REFUTED
    eq_trap = parse_formula("a = b\n~p(b)")
    assert check_redundancy(eq_trap, parse_clause("p(a)")) is Redundancy.REFUTED
    mirrored = parse_formula("p(X,Y) | ~p(Y,X) | q(b)\n~p(a,b) | p(b,a)")
    assert check_redundancy(mirrored, mirrored.get(0)) is Redundancy.CONSISTENT


def test_redundancy_capacity():
    f = parse_formula("p(X,Y,Z) | q(f(X))\n~p(a,b,c)")
    assert check_redundancy(f, f.get(0), depth=2, cap=10) is Redundancy.INCONCLUSIVE
