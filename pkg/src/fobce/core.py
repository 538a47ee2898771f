"""First-order syntax: symbols, terms, literals, clauses, formulas, substitutions."""

from __future__ import annotations

import itertools
import re
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

PREDICATE = "predicate"
FUNCTION = "function"
CONSTANT = "constant"
VARIABLE = "variable"

EQUALITY_NAME = "="


class ArityError(ValueError):
    """A symbol was applied to the wrong number of arguments."""


class Symbol:
    """An interned predicate, function or constant symbol.

    Use :func:`intern` (or the ``pred``/``fun``/``const`` helpers) rather than
    calling the constructor, so that equal ``(name, kind, arity)`` triples share
    one object and one ``id``.
    """

    __slots__ = ("id", "name", "kind", "arity", "is_equality", "_key")

    def __init__(self, id: int, name: str, kind: str, arity: int):
        if kind not in (PREDICATE, FUNCTION, CONSTANT, VARIABLE):
            raise ValueError(f"unknown symbol kind {kind!r}")
        if arity < 0:
            raise ValueError("arity must be non-negative")
        if kind in (CONSTANT, VARIABLE) and arity != 0:
            raise ArityError(f"{kind} {name!r} cannot take arguments")
        self.id = id
        self.name = name
        self.kind = kind
        self.arity = arity
        self.is_equality = kind == PREDICATE and name == EQUALITY_NAME and arity == 2
        self._key = (name, kind, arity)

    @property
    def key(self) -> Tuple[str, str, int]:
        return self._key

    def __eq__(self, other):
        return isinstance(other, Symbol) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other: "Symbol"):
        return self._key < other._key

    def __repr__(self):
        return f"{self.name}/{self.arity}"


_SYMBOLS: Dict[Tuple[str, str, int], Symbol] = {}


def intern(name: str, kind: str, arity: int = 0) -> Symbol:
    key = (name, kind, arity)
    sym = _SYMBOLS.get(key)
    if sym is None:
        sym = Symbol(len(_SYMBOLS), name, kind, arity)
        _SYMBOLS[key] = sym
    return sym


EQUALITY = intern(EQUALITY_NAME, PREDICATE, 2)


# --------------------------------------------------------------------- terms


class Var:
    __slots__ = ("name", "_hash")

    ground = False

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("V", name))

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


class App:
    """Application of a function symbol (or a constant) to argument terms."""

    __slots__ = ("symbol", "args", "ground", "_hash")

    def __init__(self, symbol: Symbol, args: Tuple["Term", ...] = ()):
        args = tuple(args)
        if symbol.kind not in (FUNCTION, CONSTANT):
            raise ValueError(f"{symbol!r} is not a function symbol")
        if len(args) != symbol.arity:
            raise ArityError(f"{symbol.name!r} expects {symbol.arity} arguments, got {len(args)}")
        self.symbol = symbol
        self.args = args
        self.ground = all(a.ground for a in args)
        self._hash = hash((symbol, args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is App
            and other._hash == self._hash
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({','.join(map(repr, self.args))})"


Term = Union[Var, App]


def const(name: str) -> App:
    return App(intern(name, CONSTANT, 0))


def fun(name: str, *args: Term) -> App:
    if not args:
        return const(name)
    return App(intern(name, FUNCTION, len(args)), args)


def is_ground(t: Term) -> bool:
    """Recursive groundness check, independent of the cached flag."""
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def term_vars(t: Term, out: Optional[dict] = None) -> dict:
    """Variables of ``t`` in left-to-right first-occurrence order (dict used as ordered set)."""
    if out is None:
        out = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.setdefault(s, None)
        elif not s.ground:
            stack.extend(reversed(s.args))
    return out


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


# ------------------------------------------------------------------ literals


class Literal:
    __slots__ = ("positive", "predicate", "args", "_hash")

    def __init__(self, positive: bool, predicate: Symbol, args: Tuple[Term, ...] = ()):
        args = tuple(args)
        if predicate.kind != PREDICATE:
            raise ValueError(f"{predicate!r} is not a predicate symbol")
        if len(args) != predicate.arity:
            raise ArityError(
                f"{predicate.name!r} expects {predicate.arity} arguments, got {len(args)}"
            )
        self.positive = bool(positive)
        self.predicate = predicate
        self.args = args
        self._hash = hash((self.positive, predicate, args))

    @property
    def is_equality(self) -> bool:
        return self.predicate.is_equality

    @property
    def ground(self) -> bool:
        return all(a.ground for a in self.args)

    def complement(self) -> "Literal":
        return Literal(not self.positive, self.predicate, self.args)

    def atom(self) -> "Literal":
        return self if self.positive else Literal(True, self.predicate, self.args)

    def variables(self) -> dict:
        out: dict = {}
        for a in self.args:
            term_vars(a, out)
        return out

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Literal
            and other._hash == self._hash
            and other.positive == self.positive
            and other.predicate == self.predicate
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_equality:
            op = "=" if self.positive else "!="
            return f"{self.args[0]!r} {op} {self.args[1]!r}"
        sign = "" if self.positive else "~"
        if not self.args:
            return sign + self.predicate.name
        return f"{sign}{self.predicate.name}({','.join(map(repr, self.args))})"


def pred(name: str, arity: int = 0) -> Symbol:
    if name == EQUALITY_NAME:
        return EQUALITY
    return intern(name, PREDICATE, arity)


def lit(name: str, *args: Term, positive: bool = True) -> Literal:
    return Literal(positive, pred(name, len(args)), args)


def neg(name: str, *args: Term) -> Literal:
    return lit(name, *args, positive=False)


def eq(s: Term, t: Term, positive: bool = True) -> Literal:
    return Literal(positive, EQUALITY, (s, t))


def neq(s: Term, t: Term) -> Literal:
    return eq(s, t, positive=False)


# ------------------------------------------------------------ canonical keys

_MAX_KEY_PERMUTATIONS = 5040


def _enc_term(t: Term, varmap: Optional[dict]):
    if isinstance(t, Var):
        if varmap is None:
            return (1, -1)
        idx = varmap.get(t)
        if idx is None:
            idx = varmap[t] = len(varmap)
        return (1, idx)
    return (0, t.symbol.key, tuple(_enc_term(a, varmap) for a in t.args))


def _enc_literal(lit: Literal, varmap: Optional[dict]):
    return (0 if lit.positive else 1, lit.predicate.key, tuple(_enc_term(a, varmap) for a in lit.args))


def canonical_key(literals: Iterable[Literal]) -> tuple:
    """Renaming-invariant, order-invariant key of a literal multiset.

    Literals are sorted by their variable-blind shape; literals with equal
    shapes are tried in every relative order (up to a bound) and the smallest
    encoding under left-to-right first-occurrence variable numbering wins.
    """
    lits = list(literals)
    if not lits:
        return ()
    shaped = sorted(((_enc_literal(l, None), l) for l in lits), key=lambda p: p[0])
    groups: List[List[Literal]] = []
    prev = object()
    for shape, l in shaped:
        if shape != prev:
            groups.append([])
            prev = shape
        groups[-1].append(l)

    n_perm = 1
    for g in groups:
        if len(g) > 1 and not all(l.ground for l in g):
            for k in range(2, len(g) + 1):
                n_perm *= k
    if n_perm == 1 or n_perm > _MAX_KEY_PERMUTATIONS:
        varmap: dict = {}
        return tuple(_enc_literal(l, varmap) for g in groups for l in g)

    choices = [
        itertools.permutations(g) if len(g) > 1 and not all(l.ground for l in g) else [tuple(g)]
        for g in groups
    ]
    best = None
    for combo in itertools.product(*choices):
        varmap = {}
        enc = tuple(_enc_literal(l, varmap) for g in combo for l in g)
        if best is None or enc < best:
            best = enc
    return best


# ------------------------------------------------------------------- clauses


class Clause:
    """A multiset of literals with a stable identifier.

    Equality and hashing ignore the identifier: two clauses are equal iff
    their literal multisets agree up to variable renaming.
    """

    __slots__ = ("literals", "id", "_key")

    def __init__(self, literals: Iterable[Literal] = (), id: Optional[int] = None):
        self.literals: Tuple[Literal, ...] = tuple(literals)
        self.id = id
        self._key = None

    def key(self) -> tuple:
        if self._key is None:
            self._key = canonical_key(self.literals)
        return self._key

    def with_id(self, id: Optional[int]) -> "Clause":
        c = Clause(self.literals, id)
        c._key = self._key
        return c

    def variables(self) -> dict:
        out: dict = {}
        for l in self.literals:
            for a in l.args:
                term_vars(a, out)
        return out

    @property
    def ground(self) -> bool:
        return all(l.ground for l in self.literals)

    @property
    def has_equality(self) -> bool:
        return any(l.is_equality for l in self.literals)

    def symbols(self) -> set:
        out = set()
        for l in self.literals:
            out.add(l.predicate)
            for a in l.args:
                for s in subterms(a):
                    if isinstance(s, App):
                        out.add(s.symbol)
        return out

    def without(self, positions: Iterable[int]) -> List[Literal]:
        drop = set(positions)
        return [l for i, l in enumerate(self.literals) if i not in drop]

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, i: int) -> Literal:
        return self.literals[i]

    def __eq__(self, other):
        return isinstance(other, Clause) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.literals:
            return "$false"
        return " | ".join(map(repr, self.literals))


def mk_clause(literals: Iterable[Literal], id: Optional[int] = None, *, dedup: bool = False) -> Clause:
    """Build a clause, checking arities; duplicates are kept unless ``dedup``."""
    lits = list(literals)
    for l in lits:
        if not isinstance(l, Literal):
            raise TypeError(f"not a literal: {l!r}")
        _check_arities(l)
    if dedup:
        lits = list(dict.fromkeys(lits))
    return Clause(lits, id)


def _check_arities(l: Literal) -> None:
    if len(l.args) != l.predicate.arity:
        raise ArityError(f"{l.predicate.name!r} expects {l.predicate.arity} arguments")
    stack = list(l.args)
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            if len(t.args) != t.symbol.arity:
                raise ArityError(f"{t.symbol.name!r} expects {t.symbol.arity} arguments")
            stack.extend(t.args)


def clause_vars(literals: Iterable[Literal]) -> dict:
    out: dict = {}
    for l in literals:
        for a in l.args:
            term_vars(a, out)
    return out


# ------------------------------------------------------------- substitutions


class Substitution:
    """Variable bindings in triangular form.

    A binding may mention variables that are themselves bound; lookups follow
    the chain (:meth:`walk`) and :meth:`resolve` produces the fully
    dereferenced term, so bindings are never expanded eagerly.
    """

    __slots__ = ("bindings",)

    def __init__(self, bindings: Optional[Dict[Var, Term]] = None):
        self.bindings: Dict[Var, Term] = {}
        for v, t in (bindings or {}).items():
            if t != v:
                self.bindings[v] = t

    def walk(self, t: Term) -> Term:
        b = self.bindings
        while isinstance(t, Var) and t in b:
            t = b[t]
        return t

    def resolve(self, t: Term, _memo: Optional[dict] = None) -> Term:
        if t.ground or not self.bindings:
            return t
        if _memo is None:
            _memo = {}
        hit = _memo.get(t)
        if hit is not None:
            return hit
        w = self.walk(t)
        if isinstance(w, Var):
            out: Term = w
        elif w.ground:
            out = w
        else:
            out = App(w.symbol, tuple(self.resolve(a, _memo) for a in w.args))
        _memo[t] = out
        return out

    def domain(self) -> set:
        return set(self.bindings)

    def as_dict(self) -> Dict[Var, Term]:
        """Fully dereferenced bindings with identity entries dropped."""
        memo: dict = {}
        out = {}
        for v in self.bindings:
            r = self.resolve(v, memo)
            if r != v:
                out[v] = r
        return out

    def compose(self, other: "Substitution") -> "Substitution":
        """``self`` then ``other``: E(self.compose(other)) == (E self) other."""
        out: Dict[Var, Term] = {}
        for v, t in self.as_dict().items():
            out[v] = apply_subst(t, other)
        for v, t in other.as_dict().items():
            if v not in out:
                out[v] = t
        return Substitution({v: t for v, t in out.items() if t != v})

    def __len__(self):
        return len(self.bindings)

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.as_dict() == other.as_dict()

    def __repr__(self):
        body = ", ".join(f"{v!r} -> {t!r}" for v, t in self.as_dict().items())
        return "{" + body + "}"


EMPTY_SUBST = Substitution()


def apply_subst(expr, subst: Substitution):
    """Apply ``subst`` to a term, literal, clause, or a sequence of literals."""
    if not subst.bindings:
        return expr
    memo: dict = {}
    if isinstance(expr, (Var, App)):
        return subst.resolve(expr, memo)
    if isinstance(expr, Literal):
        return _apply_literal(expr, subst, memo)
    if isinstance(expr, Clause):
        return Clause([_apply_literal(l, subst, memo) for l in expr.literals], expr.id)
    return [apply_subst(e, subst) for e in expr]


def _apply_literal(l: Literal, subst: Substitution, memo: dict) -> Literal:
    if l.ground:
        return l
    return Literal(l.positive, l.predicate, tuple(subst.resolve(a, memo) for a in l.args))


# ------------------------------------------------------------------ renaming


class FreshCounter:
    """Monotone source of fresh variable names ``v<n>``."""

    _pattern = re.compile(r"v(\d+)$")

    def __init__(self, start: int = 0):
        self.value = start

    def next_var(self) -> Var:
        v = Var(f"v{self.value}")
        self.value += 1
        return v

    def bump_past(self, variables: Iterable[Var]) -> None:
        for v in variables:
            m = self._pattern.match(v.name)
            if m:
                self.value = max(self.value, int(m.group(1)) + 1)


def rename_apart(clause: Clause, counter: FreshCounter) -> Clause:
    mapping = {v: counter.next_var() for v in clause.variables()}
    if not mapping:
        return clause
    out = apply_subst(clause, Substitution(mapping))
    out._key = clause._key
    return out


# ------------------------------------------------------------------- formula


class Formula:
    """A set of variable-disjoint clauses keyed by clause id."""

    def __init__(self, clauses: Iterable[Clause] = (), counter: Optional[FreshCounter] = None):
        self._clauses: Dict[int, Clause] = {}
        self._vars: Dict[Var, int] = {}
        self.counter = counter if counter is not None else FreshCounter()
        self._next_id = 0
        for c in clauses:
            self.add(c)

    def add(self, clause: Clause) -> Clause:
        """Insert ``clause``, renaming it apart if it shares variables with the formula.

        Clauses without an id get the next free one; a clashing id is an error.
        """
        cid = clause.id
        if cid is None:
            cid = self._next_id
        elif cid in self._clauses:
            raise ValueError(f"duplicate clause id {cid}")
        cvars = clause.variables()
        self.counter.bump_past(cvars)
        if any(v in self._vars for v in cvars):
            clause = rename_apart(clause, self.counter)
            cvars = clause.variables()
        if clause.id != cid:
            clause = clause.with_id(cid)
        self._clauses[cid] = clause
        for v in cvars:
            self._vars[v] = cid
        self._next_id = max(self._next_id, cid + 1)
        return clause

    def remove(self, cid: int) -> Clause:
        clause = self._clauses.pop(cid)
        for v in clause.variables():
            if self._vars.get(v) == cid:
                del self._vars[v]
        return clause

    def get(self, cid: int) -> Clause:
        return self._clauses[cid]

    def ids(self) -> List[int]:
        return sorted(self._clauses)

    def clauses(self) -> List[Clause]:
        return [self._clauses[i] for i in sorted(self._clauses)]

    def copy(self) -> "Formula":
        f = Formula(counter=FreshCounter(self.counter.value))
        f._clauses = dict(self._clauses)
        f._vars = dict(self._vars)
        f._next_id = self._next_id
        return f

    def subset(self, ids: Iterable[int]) -> "Formula":
        f = Formula(counter=FreshCounter(self.counter.value))
        for i in ids:
            f.add(self._clauses[i])
        return f

    @property
    def signature(self) -> set:
        out = set()
        for c in self._clauses.values():
            out |= c.symbols()
        return out

    @property
    def contains_equality(self) -> bool:
        return any(c.has_equality for c in self._clauses.values())

    def keys(self) -> List[tuple]:
        """Sorted canonical clause keys, for order- and renaming-invariant comparison."""
        return sorted(c.key() for c in self._clauses.values())

    def __contains__(self, item):
        if isinstance(item, Clause):
            return item.id in self._clauses
        return item in self._clauses

    def __iter__(self):
        return iter(self.clauses())

    def __len__(self):
        return len(self._clauses)

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.clauses())) + "}"
