"""Exhaustive ground-level checks, meant for tiny inputs only."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .core import (
    CONSTANT,
    EQUALITY,
    FUNCTION,
    PREDICATE,
    App,
    Clause,
    Formula,
    Literal,
    Substitution,
    Symbol,
    Term,
    apply_subst,
    eq,
    intern,
    neq,
)

DEFAULT_DEPTH = 1
DEFAULT_CAP = 20000


class CapacityError(RuntimeError):
    """Grounding would exceed the configured instance cap."""


@dataclass
class GroundFormula:
    clauses: List[Clause] = field(default_factory=list)
    atoms: Set[Literal] = field(default_factory=set)

    def add(self, clause: Clause) -> None:
        self.clauses.append(clause)
        for l in clause.literals:
            self.atoms.add(l.atom())

    def extend(self, other: "GroundFormula") -> "GroundFormula":
        for c in other.clauses:
            self.add(c)
        self.atoms |= other.atoms
        return self

    def __len__(self):
        return len(self.clauses)


# ------------------------------------------------------------------ grounding


def herbrand_universe(symbols: Iterable[Symbol], depth: int, seeds: Iterable[App] = ()) -> List[App]:
    """Ground terms of nesting depth <= ``depth``; a constant ``c`` is added if none exists."""
    symbols = set(symbols)
    consts = {App(s) for s in symbols if s.kind == CONSTANT} | set(seeds)
    if not consts:
        consts = {App(intern("c", CONSTANT, 0))}
    funcs = sorted((s for s in symbols if s.kind == FUNCTION), key=lambda s: s.key)
    level = sorted(consts, key=repr)
    universe = list(level)
    seen = set(universe)
    for _ in range(depth):
        new = []
        for f in funcs:
            for args in itertools.product(universe, repeat=f.arity):
                t = App(f, args)
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        if not new:
            break
        universe.extend(new)
    return universe


def clause_instances(clause: Clause, universe: Sequence[Term], cap: int = DEFAULT_CAP) -> List[Clause]:
    vs = list(clause.variables())
    n = len(universe) ** len(vs)
    if n > cap:
        raise CapacityError(f"{n} instances of {clause!r} exceed cap {cap}")
    out = []
    for combo in itertools.product(universe, repeat=len(vs)):
        out.append(apply_subst(clause, Substitution(dict(zip(vs, combo)))).with_id(clause.id))
    return out


def ground_instances(
    f,
    term_depth: int = DEFAULT_DEPTH,
    constants: Iterable[App] = (),
    *,
    universe: Optional[Sequence[Term]] = None,
    cap: int = DEFAULT_CAP,
) -> GroundFormula:
    clauses = f.clauses() if isinstance(f, Formula) else list(f)
    if universe is None:
        syms = set()
        for c in clauses:
            syms |= c.symbols()
        universe = herbrand_universe(syms, term_depth, constants)
    g = GroundFormula()
    for c in clauses:
        for inst in clause_instances(c, universe, cap - len(g)):
            g.add(inst)
        if len(g) > cap:
            raise CapacityError(f"more than {cap} ground instances")
    return g


def equality_axiom_instances(
    signature: Iterable[Symbol], universe: Sequence[Term], cap: int = DEFAULT_CAP
) -> GroundFormula:
    """Ground reflexivity, function congruence and predicate congruence.

    Predicate congruence is included for ``=`` itself when it is in the
    signature; that instance family supplies symmetry and transitivity.
    """
    if not universe:
        raise ValueError("universe must be nonempty")
    g = GroundFormula()
    for t in universe:
        g.add(Clause([eq(t, t)]))
    for s in sorted(signature, key=lambda s: s.key):
        if s.kind == FUNCTION:
            total = len(universe) ** (2 * s.arity)
            if len(g) + total > cap:
                raise CapacityError("equality axioms exceed cap")
            for xs in itertools.product(universe, repeat=s.arity):
                for ys in itertools.product(universe, repeat=s.arity):
                    lits = [neq(x, y) for x, y in zip(xs, ys)]
                    lits.append(eq(App(s, xs), App(s, ys)))
                    g.add(Clause(lits))
        elif s.kind == PREDICATE:
            total = len(universe) ** (2 * s.arity)
            if len(g) + total > cap:
                raise CapacityError("equality axioms exceed cap")
            for xs in itertools.product(universe, repeat=s.arity):
                for ys in itertools.product(universe, repeat=s.arity):
                    lits = [neq(x, y) for x, y in zip(xs, ys)]
                    lits.append(Literal(False, s, xs))
                    lits.append(Literal(True, s, ys))
                    g.add(Clause(lits))
    return g


# ------------------------------------------------------------ assignments


class GroundAssignment(Mapping):
    """Total map from a declared atom universe to truth values."""

    def __init__(self, values: Mapping[Literal, bool]):
        self._values: Dict[Literal, bool] = {a.atom(): bool(v) for a, v in values.items()}

    def __getitem__(self, atom: Literal) -> bool:
        return self._values[atom.atom()]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def value(self, literal: Literal) -> bool:
        v = self._values[literal.atom()]
        return v if literal.positive else not v

    def satisfies(self, clause: Clause) -> bool:
        return any(self.value(l) for l in clause.literals)

    def satisfies_all(self, clauses: Iterable[Clause]) -> bool:
        return all(self.satisfies(c) for c in clauses)

    def replace(self, changes: Mapping[Literal, bool]) -> "GroundAssignment":
        vals = dict(self._values)
        vals.update(changes)
        return GroundAssignment(vals)

    def true_literals(self) -> List[Literal]:
        return [a if v else a.complement() for a, v in sorted(self._values.items(), key=repr)]

    def __eq__(self, other):
        if isinstance(other, GroundAssignment):
            return self._values == other._values
        return NotImplemented

    def __repr__(self):
        return " ".join(map(repr, self.true_literals()))


def flip(a: GroundAssignment, literal: Literal) -> GroundAssignment:
    atom = literal.atom()
    if atom not in a:
        raise KeyError(f"{atom!r} is not in the assignment's universe")
    return a.replace({atom: not a[atom]})


def equivalence_flip(a: GroundAssignment, literal: Literal) -> GroundAssignment:
    """Invert ``literal``'s atom and every atom of the same predicate whose
    arguments the assignment makes pairwise equal to it."""
    if literal.is_equality:
        raise ValueError("equivalence flipping is undefined for equality literals")
    atom = literal.atom()
    if atom not in a:
        raise KeyError(f"{atom!r} is not in the assignment's universe")
    changes = {atom: not a[atom]}
    for other in a:
        if other.predicate != atom.predicate or other == atom:
            continue
        if all(a.get(eq(t, s).atom(), False) for t, s in zip(atom.args, other.args)):
            changes[other] = not a[other]
    return a.replace(changes)


def repair_by_flipping(
    a: GroundAssignment,
    blocked_instances: Sequence[Tuple[Clause, Literal]],
    mode: str = "flip",
    others: Sequence[Clause] = (),
) -> GroundAssignment:
    """Satisfy every instance by flipping its blocking-literal instance.

    ``blocked_instances`` pairs each ground instance of the blocked clause
    with its instance of the blocking literal. ``others`` are the clauses the
    input assignment must satisfy (the other ground instances, plus equality
    axiom instances in ``equivalence_flip`` mode); they are checked before
    and after.
    """
    step = {"flip": flip, "equivalence_flip": equivalence_flip}[mode]
    if not a.satisfies_all(others):
        raise ValueError("assignment does not satisfy the given clauses")
    for _ in range(len(blocked_instances) + 1):
        pending = [(c, l) for c, l in blocked_instances if not a.satisfies(c)]
        if not pending:
            if not a.satisfies_all(others):
                raise ValueError("flipping falsified a clause: the clause is not blocked")
            return a
        clause, lit = pending[0]
        a = step(a, lit)
    raise ValueError("flipping did not converge: the clause is not blocked")


# ------------------------------------------------------------------ solver


def prop_sat(g) -> Optional[GroundAssignment]:
    """DPLL with unit propagation; returns a model over all atoms or None."""
    clauses = g.clauses if isinstance(g, GroundFormula) else list(g)
    atoms: Set[Literal] = set(g.atoms) if isinstance(g, GroundFormula) else set()
    for c in clauses:
        for l in c.literals:
            atoms.add(l.atom())
    order = sorted(atoms, key=repr)
    num = {a: i + 1 for i, a in enumerate(order)}
    cnf = []
    for c in clauses:
        lits = {num[l.atom()] if l.positive else -num[l.atom()] for l in c.literals}
        if any(-x in lits for x in lits):
            continue
        cnf.append(lits)
    model = _dpll(cnf)
    if model is None:
        return None
    return GroundAssignment({a: model.get(num[a], False) for a in order})


def _dpll(cnf: List[Set[int]]) -> Optional[Dict[int, bool]]:
    """Chronological-backtracking DPLL with two watched literals per clause."""
    clauses = [sorted(c, key=lambda x: (abs(x), x)) for c in cnf]
    value: Dict[int, bool] = {}
    watches: Dict[int, List[int]] = {}
    units: List[int] = []
    for i, c in enumerate(clauses):
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
        for x in c[:2]:
            watches.setdefault(x, []).append(i)

    def val(x: int) -> Optional[bool]:
        v = value.get(abs(x))
        return None if v is None else v == (x > 0)

    trail: List[int] = []
    # decision levels: (trail length before decision, decided literal, already flipped)
    levels: List[Tuple[int, int, bool]] = []

    def enqueue(x: int) -> bool:
        v = val(x)
        if v is not None:
            return v
        value[abs(x)] = x > 0
        trail.append(x)
        return True

    def propagate(head: int) -> Tuple[bool, int]:
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit, [])
            keep = []
            conflict = False
            for k, i in enumerate(watching):
                if conflict:
                    keep.append(i)
                    continue
                c = clauses[i]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if val(c[0]) is True:
                    keep.append(i)
                    continue
                for j in range(2, len(c)):
                    if val(c[j]) is not False:
                        c[1], c[j] = c[j], c[1]
                        watches.setdefault(c[1], []).append(i)
                        break
                else:
                    keep.append(i)
                    if not enqueue(c[0]):
                        conflict = True
            watches[false_lit] = keep
            if conflict:
                return False, head
        return True, head

    for x in units:
        if not enqueue(x):
            return None
    ok, head = propagate(0)
    variables = sorted({abs(x) for c in clauses for x in c})
    while True:
        if ok:
            pick = next((v for v in variables if v not in value), None)
            if pick is None:
                return value
            levels.append((len(trail), pick, False))
            enqueue(pick)
        else:
            while levels and levels[-1][2]:
                levels.pop()
            if not levels:
                return None
            mark, lit_, _ = levels.pop()
            for x in trail[mark:]:
                del value[abs(x)]
            del trail[mark:]
            head = mark
            levels.append((mark, -lit_, True))
            enqueue(-lit_)
        ok, head = propagate(head)


# --------------------------------------------------------------- redundancy


class Redundancy(enum.Enum):
    CONSISTENT = "consistent"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


def grounding_with_axioms(
    clauses: Sequence[Clause],
    universe: Sequence[Term],
    signature: Iterable[Symbol],
    with_equality: bool,
    cap: int = DEFAULT_CAP,
) -> GroundFormula:
    g = ground_instances(clauses, universe=universe, cap=cap)
    if with_equality:
        sig = set(signature) | {EQUALITY}
        g.extend(equality_axiom_instances(sig, universe, cap))
    return g


def check_redundancy(
    f: Formula, c: Clause, depth: int = DEFAULT_DEPTH, cap: int = DEFAULT_CAP
) -> Redundancy:
    """Compare satisfiability of F minus C and F plus C at a bounded grounding.

    Both groundings share the universe and signature of F plus C. Equality
    axioms are added iff ``=`` occurs. For function-free inputs the grounding
    is complete, so ``REFUTED`` is a genuine counterexample to redundancy.
    """
    if c.id is not None and c.id in f:
        rest = [d for d in f.clauses() if d.id != c.id]
    else:
        rest = [d for d in f.clauses() if d != c]
    full = rest + [c]
    sig: Set[Symbol] = set()
    for d in full:
        sig |= d.symbols()
    with_eq = any(d.has_equality for d in full)
    try:
        universe = herbrand_universe(sig, depth)
        g_without = grounding_with_axioms(rest, universe, sig, with_eq, cap)
        g_with = grounding_with_axioms(full, universe, sig, with_eq, cap)
    except CapacityError:
        return Redundancy.INCONCLUSIVE
    sat_without = prop_sat(g_without) is not None
    sat_with = prop_sat(g_with) is not None
    if sat_without and not sat_with:
        return Redundancy.REFUTED
    return Redundancy.CONSISTENT
