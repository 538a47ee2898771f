import pytest
from hypothesis import given, settings, strategies as st

from fobce.core import FUNCTION, Clause, Var, const, eq, fun, intern, lit, neg, neq, subterms
from fobce.resolve import (
    Sat,
    approx_valid,
    congruence_decide,
    flat_l_resolvent,
    flatten,
    is_valid_eq,
    is_valid_eq_approx,
    is_valid_noeq,
    l_resolvent,
)

from oracles import brute_congruence_sat, entails_by_grounding, valid_by_grounding
from randgen import A, B, C, EQUALITY, P2, Q1, literal, seeded, term

a, b, c = const("a"), const("b"), const("c")
x, y, u, v, xp = Var("x"), Var("y"), Var("u"), Var("v"), Var("xp")
x1, x2, x3 = Var("x1"), Var("x2"), Var("x3")
P_F = intern("f", FUNCTION, 1)


def test_flatten_nested_arguments():
    clause = Clause([lit("p", fun("f", x), c, c), lit("q", c)])
    fc = flatten(clause, 0)
    expected = [neq(x1, fun("f", x)), neq(x2, c), neq(x3, c), lit("p", x1, x2, x3), lit("q", c)]
    assert list(fc.clause.literals) == expected
    assert fc.fresh_vars == (x1, x2, x3)


def test_flatten_unit():
    assert list(flatten(Clause([lit("p", a)]), 0).clause.literals) == [neq(x1, a), lit("p", x1)]


def test_flatten_nullary_adds_no_guards():
    fc = flatten(Clause([lit("p"), lit("q")]), 0)
    assert fc.clause.literals == (lit("p"), lit("q"))
    assert fc.disequation_guards == ()


def test_flatten_rejects_equality():
    with pytest.raises(ValueError):
        flatten(Clause([eq(a, b)]), 0)


def test_l_resolvent_all_partners():
    cc = Clause([lit("p", x, y), lit("p", y, x)])
    d = Clause([neg("p", u, v), neg("p", v, u)])
    r = l_resolvent(cc, 0, d, [0, 1])
    assert r == Clause([lit("p", x, x)])
    assert not is_valid_noeq(r)


def test_l_resolvent_example():
    cc = Clause([lit("p", x, y), neg("p", y, x), lit("q", b)])
    d = Clause([neg("p", a, b), lit("p", b, a)])
    r = l_resolvent(cc, 0, d, [0])
    assert list(r.literals) == [neg("p", b, a), lit("q", b), lit("p", b, a)]
    assert is_valid_noeq(r)


def test_l_resolvent_clash():
    assert l_resolvent(Clause([lit("p", a), lit("r")]), 0, Clause([neg("p", b), lit("s")]), [0]) is None


def test_l_resolvent_bad_selection():
    cc, d = Clause([lit("p", x)]), Clause([lit("p", a)])
    with pytest.raises(ValueError):
        l_resolvent(cc, 0, d, [0])
    with pytest.raises(ValueError):
        l_resolvent(cc, 0, Clause([neg("p", a)]), [])


def test_flat_resolvent_not_valid():
    fr = flat_l_resolvent(Clause([lit("p", a)]), 0, Clause([neg("p", b)]), [0])
    assert list(fr.clause.literals) == [neq(x1, a), neq(x1, b)]
    assert not is_valid_eq(fr.clause)
    assert not is_valid_eq_approx(fr)


def test_flat_resolvent_agatha():
    cc = Clause([lit("l", a)])
    d = Clause([neg("l", x), eq(x, a), eq(x, b), eq(x, c)])
    fr = flat_l_resolvent(cc, 0, d, [0])
    assert list(fr.clause.literals) == [neq(x1, a), neq(x1, x), eq(x, a), eq(x, b), eq(x, c)]
    assert is_valid_eq(fr.clause)
    assert is_valid_eq_approx(fr)


def test_flat_resolvent_with_variables():
    fr = flat_l_resolvent(Clause([lit("p", x), lit("q")]), 0, Clause([neg("p", xp), lit("r")]), [0])
    assert list(fr.clause.literals) == [neq(x1, x), neq(x1, xp), lit("q"), lit("r")]


def test_is_valid_noeq():
    assert is_valid_noeq(Clause([lit("q"), neg("q")]))
    assert not is_valid_noeq(Clause([lit("p", x, x)]))
    assert not is_valid_noeq(Clause([]))
    with pytest.raises(ValueError):
        is_valid_noeq(Clause([eq(a, a)]))
    # read as an uninterpreted predicate, a = a is not valid on its own
    assert not is_valid_noeq(Clause([eq(a, a)]), syntactic_equality=True)
    assert is_valid_noeq(Clause([eq(a, b), neq(a, b)]), syntactic_equality=True)


def test_is_valid_eq():
    assert is_valid_eq(Clause([eq(x, x)]))
    assert not is_valid_eq(Clause([neq(x1, a), neq(x1, b)]))
    assert is_valid_eq(Clause([neq(a, b), neg("p", a), lit("p", b)]))
    assert not is_valid_eq(Clause([]))


def test_approx_reflexive():
    assert approx_valid([], [eq(fun("f", a), fun("f", a))])


def test_congruence_examples():
    p_a = lit("p", a)
    p_b = lit("p", b)
    assert congruence_decide([(a, b)], [], [(p_a, True), (p_b, False)]) is Sat.UNSATISFIABLE
    assert congruence_decide([], [(a, a)], []) is Sat.UNSATISFIABLE
    assert congruence_decide([(fun("f", a), b), (a, c)], [(fun("f", c), b)]) is Sat.UNSATISFIABLE
    assert congruence_decide([(a, b)], [(a, c)]) is Sat.SATISFIABLE


def test_congruence_derived_by_enumeration():
    # cross-check the f(a)=b, a=c, f(c)!=b conflict with exhaustive partition search
    assert not brute_congruence_sat([(fun("f", a), b), (a, c)], [(fun("f", c), b)])
    assert brute_congruence_sat([(fun("f", a), b)], [(fun("f", c), b)])


def test_congruence_rejects_open_terms():
    with pytest.raises(ValueError):
        congruence_decide([(x, a)], [])
    with pytest.raises(ValueError):
        congruence_decide([], [], [(eq(a, b), True)])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_congruence_matches_enumeration(seed):
    rng = seeded(seed)
    consts = (A, B, C)

    def gt():
        return term(rng, [], depth=2, consts=consts, funcs=(P_F,))

    eqs = [(gt(), gt()) for _ in range(rng.randint(0, 3))]
    diseqs = [(gt(), gt()) for _ in range(rng.randint(0, 2))]
    atoms = [(lit("q", gt()), rng.random() < 0.5) for _ in range(rng.randint(0, 2))]
    pool = {s for pair in eqs + diseqs for t in pair for s in subterms(t)}
    pool |= {s for at, _ in atoms for s in subterms(at.args[0])}
    if len(pool) > 8:  # keep the partition search small
        return
    fast = congruence_decide(eqs, diseqs, atoms) is Sat.SATISFIABLE
    assert fast == brute_congruence_sat(eqs, diseqs, atoms)


def _random_eq_clause(rng):
    vs = [x, y][: rng.randint(0, 2)]
    preds = [P2, Q1, EQUALITY]
    return [literal(rng, preds, vs, depth=0, consts=(A, B), funcs=()) for _ in range(rng.randint(1, 4))]


def test_is_valid_eq_matches_grounding():
    rng = seeded(11)
    valid = 0
    for _ in range(300):
        lits = _random_eq_clause(rng)
        expected = valid_by_grounding(lits)
        assert is_valid_eq(lits) == expected, lits
        valid += expected
    assert valid > 20


def test_approx_implies_exact():
    rng = seeded(5)
    hits = 0
    for _ in range(1000):
        xs = [Var(f"g{i}") for i in range(rng.randint(1, 2))]
        vs = [x, y]
        guards = [(rng.choice(xs), term(rng, vs, depth=1, consts=(A, B), funcs=(P_F,))) for _ in range(rng.randint(1, 4))]
        body = [literal(rng, [P2, Q1, EQUALITY], vs + xs, depth=1, consts=(A, B), funcs=(P_F,)) for _ in range(rng.randint(0, 3))]
        if approx_valid(guards, body):
            hits += 1
            assert is_valid_eq([neq(g, t) for g, t in guards] + body)
    assert hits > 50


def test_flattening_preserves_meaning():
    rng = seeded(21)
    for _ in range(300):
        lits = _random_eq_clause(rng)
        positions = [i for i, l in enumerate(lits) if not l.is_equality]
        if not positions:
            continue
        clause = Clause(lits)
        flat = flatten(clause, rng.choice(positions)).clause
        assert entails_by_grounding(clause, flat)
        assert entails_by_grounding(flat, clause)
