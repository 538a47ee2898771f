"""L-resolvents, flattening, flat L-resolvents and clause validity."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    CONSTANT,
    App,
    Clause,
    Literal,
    Substitution,
    Term,
    Var,
    apply_subst,
    clause_vars,
    intern,
    neq,
)
from .unify import UnifClosure, complementary_under, literal_set_mgu


class Sat(enum.Enum):
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"


def _fresh_names(avoid: Iterable[Var], prefix: str = "x"):
    used = {v.name for v in avoid}
    for i in itertools.count(1):
        name = f"{prefix}{i}"
        if name not in used:
            yield Var(name)


# ---------------------------------------------------------------- flattening


@dataclass
class FlatClause:
    original: Clause
    clause: Clause
    flattened_positions: Tuple[int, ...]
    disequation_guards: Tuple[Literal, ...]
    fresh_vars: Tuple[Var, ...]


def flatten(clause: Clause, position: int, fresh=None) -> FlatClause:
    """Replace the arguments of one literal by fresh variables guarded by disequations.

    The result lists the guards first, then the flattened literal, then the
    remaining literals in their original order.
    """
    target = clause.literals[position]
    if target.is_equality:
        raise ValueError("equality literals cannot be flattened")
    if fresh is None:
        fresh = _fresh_names(clause.variables())
    xs = tuple(next(fresh) for _ in target.args)
    guards = tuple(neq(x, t) for x, t in zip(xs, target.args))
    flat_lit = Literal(target.positive, target.predicate, xs)
    rest = clause.without([position])
    return FlatClause(
        original=clause,
        clause=Clause(guards + (flat_lit,) + tuple(rest), clause.id),
        flattened_positions=(position,),
        disequation_guards=guards,
        fresh_vars=xs,
    )


# --------------------------------------------------------------- resolvents


def _check_selection(c: Clause, l_pos: int, d: Clause, n_positions: Sequence[int]) -> Literal:
    if not n_positions:
        raise ValueError("at least one partner literal must be selected")
    if len(set(n_positions)) != len(n_positions):
        raise ValueError("partner positions must be distinct")
    L = c.literals[l_pos]
    for j in n_positions:
        n = d.literals[j]
        if n.predicate != L.predicate or n.positive == L.positive:
            raise ValueError(f"{n!r} is not complementary in predicate/polarity to {L!r}")
    return L


def l_resolvent(c: Clause, l_pos: int, d: Clause, n_positions: Sequence[int]) -> Optional[Clause]:
    """C'σ ∨ D'σ for σ = mgu(L, ~N_1, ..., ~N_l); None when not unifiable."""
    L = _check_selection(c, l_pos, d, n_positions)
    sigma = literal_set_mgu(L, [d.literals[j] for j in n_positions])
    if sigma is None:
        return None
    rest = c.without([l_pos]) + d.without(n_positions)
    return Clause(apply_subst(rest, sigma))


@dataclass
class FlatResolvent:
    """A flat L-resolvent with its flattening guards kept apart.

    ``guards`` holds ``(x_j, t)`` for every guard literal ``x_j != t``;
    ``body`` holds the remaining literals and ``origin`` records where each
    came from (``("c", i)`` or ``("d", j)`` positions in the premises).
    """

    clause: Clause
    guards: Tuple[Tuple[Var, Term], ...]
    body: Tuple[Literal, ...]
    origin: Tuple[Tuple[str, int], ...] = field(default=())


def flat_l_resolvent(c: Clause, l_pos: int, d: Clause, n_positions: Sequence[int]) -> FlatResolvent:
    L = _check_selection(c, l_pos, d, n_positions)
    if L.is_equality:
        raise ValueError("flat resolvents are not defined on equality literals")
    fresh = _fresh_names(itertools.chain(c.variables(), d.variables()))
    xs = [next(fresh) for _ in L.args]
    guards: List[Tuple[Var, Term]] = list(zip(xs, L.args))
    for j in n_positions:
        # the trivial mgu maps every y_ij to x_j
        guards.extend(zip(xs, d.literals[j].args))
    body: List[Literal] = []
    origin: List[Tuple[str, int]] = []
    for i, l in enumerate(c.literals):
        if i != l_pos:
            body.append(l)
            origin.append(("c", i))
    chosen = set(n_positions)
    for j, l in enumerate(d.literals):
        if j not in chosen:
            body.append(l)
            origin.append(("d", j))
    guard_lits = tuple(neq(x, t) for x, t in guards)
    return FlatResolvent(
        clause=Clause(guard_lits + tuple(body)),
        guards=tuple(guards),
        body=tuple(body),
        origin=tuple(origin),
    )


# ----------------------------------------------------------------- validity


def is_valid_noeq(clause, closure: Optional[UnifClosure] = None, *, syntactic_equality: bool = False) -> bool:
    """True iff the clause holds a complementary pair (modulo ``closure``).

    Equality literals are an error unless ``syntactic_equality`` asks for
    ``=`` to be read as an uninterpreted predicate.
    """
    lits = clause.literals if isinstance(clause, Clause) else tuple(clause)
    if not syntactic_equality and any(l.is_equality for l in lits):
        raise ValueError("is_valid_noeq does not handle equality literals")
    if closure is None:
        seen = set(lits)
        return any(l.complement() in seen for l in lits if l.positive)
    for a, b in itertools.combinations(lits, 2):
        if complementary_under(closure, a, b):
            return True
    return False


class _Congruence:
    """Ground congruence closure over a hash-consed term dag.

    The lower node id always becomes the class root, so merges are
    reproducible. Atoms ``P(t1..tn)`` are nodes headed by the predicate symbol.
    """

    def __init__(self):
        self.ids: Dict[object, int] = {}
        self.parent: List[int] = []
        self.uses: List[List[int]] = []
        self.head: List[object] = []
        self.kids: List[Tuple[int, ...]] = []
        self.table: Dict[tuple, int] = {}

    def find(self, i: int) -> int:
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def node(self, head, args: Sequence[Term] = ()) -> int:
        kids = tuple(self.term(a) for a in args)
        key = (head, tuple(self.find(k) for k in kids))
        hit = self.table.get(key)
        if hit is not None:
            return hit
        i = len(self.parent)
        self.parent.append(i)
        self.uses.append([])
        self.head.append(head)
        self.kids.append(kids)
        self.table[key] = i
        for k in kids:
            self.uses[self.find(k)].append(i)
        return i

    def term(self, t: Term) -> int:
        if isinstance(t, Var):
            raise ValueError(f"congruence closure needs ground terms, got {t!r}")
        i = self.ids.get(t)
        if i is None:
            i = self.node(t.symbol, t.args)
            self.ids[t] = i
        return i

    def _sig(self, i: int) -> tuple:
        return (self.head[i], tuple(self.find(k) for k in self.kids[i]))

    def merge(self, a: int, b: int) -> None:
        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            rx, ry = self.find(x), self.find(y)
            if rx == ry:
                continue
            keep, drop = (rx, ry) if rx < ry else (ry, rx)
            self.parent[drop] = keep
            for p in self.uses[drop]:
                key = self._sig(p)
                q = self.table.get(key)
                if q is None:
                    self.table[key] = p
                elif self.find(q) != self.find(p):
                    pending.append((p, q))
            self.uses[keep].extend(self.uses[drop])
            self.uses[drop] = []


def congruence_decide(
    equations: Iterable[Tuple[Term, Term]],
    disequations: Iterable[Tuple[Term, Term]] = (),
    atoms: Iterable[Tuple[Literal, bool]] = (),
) -> Sat:
    """Decide a conjunction of ground equations, disequations and (non-≈) atoms.

    ``atoms`` pairs each ground atom with the polarity it is asserted with.
    """
    cc = _Congruence()
    eqs = [(cc.term(s), cc.term(t)) for s, t in equations]
    diseqs = [(cc.term(s), cc.term(t)) for s, t in disequations]
    pos: List[int] = []
    negs: List[int] = []
    for atom, polarity in atoms:
        if atom.is_equality:
            raise ValueError("equality atoms belong in equations/disequations")
        if not atom.ground:
            raise ValueError(f"congruence closure needs ground atoms, got {atom!r}")
        (pos if polarity else negs).append(cc.node(atom.predicate, atom.args))
    for a, b in eqs:
        cc.merge(a, b)
    for a, b in diseqs:
        if cc.find(a) == cc.find(b):
            return Sat.UNSATISFIABLE
    if pos and negs:
        pos_roots = {cc.find(p) for p in pos}
        if any(cc.find(n) in pos_roots for n in negs):
            return Sat.UNSATISFIABLE
    return Sat.SATISFIABLE


def skolemize(literals: Sequence[Literal], prefix: str = "$sk") -> List[Literal]:
    """Replace every variable by a fresh constant from a reserved namespace."""
    mapping = {
        v: App(intern(f"{prefix}{i}", CONSTANT, 0)) for i, v in enumerate(clause_vars(literals))
    }
    return apply_subst(list(literals), Substitution(mapping))


def negated_closure_sat(literals: Sequence[Literal]) -> Sat:
    """Satisfiability of the skolemized negation of the universal closure of a clause."""
    ground = skolemize(literals)
    equations = []
    disequations = []
    atoms = []
    for l in ground:
        if l.is_equality:
            # the clause literal is negated
            (disequations if l.positive else equations).append(l.args)
        else:
            atoms.append((l.atom(), not l.positive))
    return congruence_decide(equations, disequations, atoms)


def is_valid_eq(clause) -> bool:
    lits = clause.literals if isinstance(clause, Clause) else tuple(clause)
    return negated_closure_sat(lits) is Sat.UNSATISFIABLE


# -------------------------------------------------- approximate eq validity


def _normalize(t: Term, rewrite: Dict[Term, Term]) -> Term:
    # one outermost-first, left-to-right pass; replacements are not revisited
    r = rewrite.get(t)
    if r is not None:
        return r
    if isinstance(t, Var) or not t.args:
        return t
    return App(t.symbol, tuple(_normalize(a, rewrite) for a in t.args))


def approx_valid(guards: Sequence[Tuple[Term, Term]], body: Sequence[Literal]) -> bool:
    """Sound, incomplete validity test driven only by the flattening guards.

    The guard pairs are grouped into classes (no congruence), every subterm of
    the body is rewritten once to its class representative, and the clause
    counts as valid if a literal ``t = t`` or a complementary pair appears.
    """
    parent: Dict[Term, Term] = {}

    def find(t: Term) -> Term:
        while parent.get(t, t) != t:
            t = parent[t]
        return t

    order: Dict[Term, int] = {}
    for s, t in guards:
        for u in (s, t):
            order.setdefault(u, len(order))
    for s, t in guards:
        rs, rt = find(s), find(t)
        if rs != rt:
            # lowest first-occurrence index represents the class
            if order[rs] < order[rt]:
                parent[rt] = rs
            else:
                parent[rs] = rt
    rewrite = {u: find(u) for u in order if find(u) != u}
    lits = [
        Literal(l.positive, l.predicate, tuple(_normalize(a, rewrite) for a in l.args)) for l in body
    ]
    seen = set()
    for l in lits:
        if l.is_equality and l.positive and l.args[0] == l.args[1]:
            return True
        if l.complement() in seen:
            return True
        seen.add(l)
    return False


def is_valid_eq_approx(resolvent: FlatResolvent) -> bool:
    return approx_valid(resolvent.guards, resolvent.body)
