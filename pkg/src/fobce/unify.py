"""Most general unifiers and unification closures."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .core import App, Literal, Substitution, Term, Var


class UnificationError(Exception):
    pass


class ClashError(UnificationError):
    """Two distinct function or predicate heads were equated."""


class OccursCheckError(UnificationError):
    """A variable would have to be bound to a term containing it."""


Pair = Union[Tuple[Term, Term], Tuple[Literal, Literal]]


def _occurs(v: Var, t: Term, s: Substitution) -> bool:
    stack = [t]
    seen = set()
    while stack:
        u = s.walk(stack.pop())
        if isinstance(u, Var):
            if u == v:
                return True
        elif not u.ground and id(u) not in seen:
            seen.add(id(u))
            stack.extend(u.args)
    return False


def _term_pairs(pairs: Iterable[Pair]) -> List[Tuple[Term, Term]]:
    out = []
    for a, b in pairs:
        if isinstance(a, Literal) or isinstance(b, Literal):
            if not (isinstance(a, Literal) and isinstance(b, Literal)):
                raise TypeError("cannot unify a literal with a term")
            if a.predicate != b.predicate or a.positive != b.positive:
                raise ClashError(f"{a!r} and {b!r} have different predicates or polarity")
            out.extend(zip(a.args, b.args))
        else:
            out.append((a, b))
    return out


def mgu(pairs: Iterable[Pair], subst: Optional[Substitution] = None) -> Substitution:
    """Most general simultaneous unifier of ``pairs`` in triangular form.

    Raises :class:`ClashError` or :class:`OccursCheckError` when none exists.
    Passing ``subst`` extends an existing unifier (it is not modified).
    """
    s = Substitution(dict(subst.bindings) if subst is not None else None)
    b = s.bindings
    stack = _term_pairs(pairs)
    stack.reverse()
    while stack:
        x, y = stack.pop()
        x = s.walk(x)
        y = s.walk(y)
        if x is y or x == y:
            continue
        if isinstance(x, Var):
            if _occurs(x, y, s):
                raise OccursCheckError(f"{x!r} occurs in {y!r}")
            b[x] = y
        elif isinstance(y, Var):
            if _occurs(y, x, s):
                raise OccursCheckError(f"{y!r} occurs in {x!r}")
            b[y] = x
        else:
            if x.symbol != y.symbol:
                raise ClashError(f"cannot unify {x!r} with {y!r}")
            stack.extend(reversed(list(zip(x.args, y.args))))
    return s


def try_mgu(pairs: Iterable[Pair], subst: Optional[Substitution] = None) -> Optional[Substitution]:
    try:
        return mgu(pairs, subst)
    except UnificationError:
        return None


def unifiable(a: Literal, b: Literal) -> bool:
    return a.predicate == b.predicate and a.positive == b.positive and try_mgu([(a, b)]) is not None


def literal_set_mgu(base: Literal, partners: Sequence[Literal]) -> Optional[Substitution]:
    """mgu of ``base`` together with the complements of ``partners``."""
    s: Optional[Substitution] = Substitution()
    for n in partners:
        if n.predicate != base.predicate or n.positive == base.positive:
            return None
        s = try_mgu(zip(base.args, n.args), s)
        if s is None:
            return None
    return s


# ------------------------------------------------------- unification closure


class UnifClosure:
    """Union-find over term nodes describing the effect of an mgu.

    Classes are merged only as far as unification forces; :meth:`equivalent`
    decides whether two arbitrary terms become identical under the mgu,
    comparing structurally below class representatives so the substitution is
    never built.
    """

    def __init__(self):
        self._ids: Dict[Term, int] = {}
        self._terms: List[Term] = []
        self._parent: List[int] = []
        self._rank: List[int] = []
        self._low: List[int] = []
        self._fn: List[Optional[int]] = []
        self.failed = False

    # nodes
    def _node(self, t: Term) -> int:
        i = self._ids.get(t)
        if i is not None:
            return i
        if isinstance(t, App):
            for a in t.args:
                self._node(a)
        i = len(self._terms)
        self._ids[t] = i
        self._terms.append(t)
        self._parent.append(i)
        self._rank.append(0)
        self._low.append(i)
        self._fn.append(i if isinstance(t, App) else None)
        return i

    def find(self, i: int) -> int:
        p = self._parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def _link(self, a: int, b: int) -> int:
        if self._rank[a] < self._rank[b]:
            a, b = b, a
        self._parent[b] = a
        if self._rank[a] == self._rank[b]:
            self._rank[a] += 1
        self._low[a] = min(self._low[a], self._low[b])
        return a

    def _union(self, s: Term, t: Term) -> bool:
        work = [(self._node(s), self._node(t))]
        while work:
            a, b = work.pop()
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            fa, fb = self._fn[ra], self._fn[rb]
            root = self._link(ra, rb)
            if fa is not None and fb is not None:
                ta, tb = self._terms[fa], self._terms[fb]
                if ta.symbol != tb.symbol:
                    return False
                keep = min(fa, fb)
                self._fn[root] = keep
                for x, y in zip(ta.args, tb.args):
                    work.append((self._ids[x], self._ids[y]))
            else:
                self._fn[root] = fa if fa is not None else fb
        return True

    def _acyclic(self) -> bool:
        # occurs check: the graph class -> classes of the representative's arguments
        state: Dict[int, int] = {}
        for start in range(len(self._terms)):
            r = self.find(start)
            if r in state:
                continue
            stack = [(r, iter(self._children(r)))]
            state[r] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                    continue
                st = state.get(nxt)
                if st == 1:
                    return False
                if st is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(self._children(nxt))))
        return True

    def _children(self, root: int) -> List[int]:
        f = self._fn[root]
        if f is None:
            return []
        return [self.find(self._ids[a]) for a in self._terms[f].args]

    # queries
    def representative(self, t: Term) -> Optional[int]:
        """Lowest node id in ``t``'s class, or None if ``t`` is not a node."""
        i = self._ids.get(t)
        if i is None:
            return None
        return self._low[self.find(i)]

    def same_class(self, s: Term, t: Term) -> bool:
        a, b = self._ids.get(s), self._ids.get(t)
        if a is None or b is None:
            return s == t
        return self.find(a) == self.find(b)

    def _view(self, t: Term):
        i = self._ids.get(t)
        if i is None:
            if isinstance(t, Var):
                return ("var", t)
            return t
        r = self.find(i)
        f = self._fn[r]
        if f is None:
            return ("var", r)
        return self._terms[f]

    def equivalent(self, s: Term, t: Term) -> bool:
        """True iff ``s`` and ``t`` are identical after applying the mgu."""
        memo: Dict[Tuple[int, int], bool] = {}
        return self._equiv(s, t, memo)

    def _equiv(self, s: Term, t: Term, memo) -> bool:
        if s is t or s == t:
            return True
        a, b = self._ids.get(s), self._ids.get(t)
        if a is not None and b is not None and self.find(a) == self.find(b):
            return True
        vs, vt = self._view(s), self._view(t)
        if isinstance(vs, tuple) or isinstance(vt, tuple):
            return vs == vt
        if vs.symbol != vt.symbol:
            return False
        key = (id(vs), id(vt))
        hit = memo.get(key)
        if hit is None:
            hit = all(self._equiv(x, y, memo) for x, y in zip(vs.args, vt.args))
            memo[key] = hit
        return hit


def unification_closure(base: Literal, partners: Sequence[Literal]) -> Optional[UnifClosure]:
    """Closure of ``base`` unified with the complement of every partner; None on failure."""
    uc = UnifClosure()
    for a in base.args:
        uc._node(a)
    for n in partners:
        if n.predicate != base.predicate or n.positive == base.positive:
            return None
        for x, y in zip(base.args, n.args):
            if not uc._union(x, y):
                uc.failed = True
                return None
    if not uc._acyclic():
        uc.failed = True
        return None
    return uc


def complementary_under(closure: UnifClosure, l1: Literal, l2: Literal) -> bool:
    if l1.predicate != l2.predicate or l1.positive == l2.positive:
        return False
    return all(closure.equivalent(a, b) for a, b in zip(l1.args, l2.args))
