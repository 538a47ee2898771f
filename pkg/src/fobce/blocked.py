"""Deciding whether a literal blocks (or equality-blocks) a clause."""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import Clause, Formula, Literal, apply_subst, neq, rename_apart
from .resolve import (
    approx_valid,
    flat_l_resolvent,
    is_valid_eq,
    l_resolvent,
    is_valid_noeq,
)
from .unify import complementary_under, literal_set_mgu, try_mgu, unification_closure

NOEQ = "noeq"
EQ = "eq"
EXACT = "exact"
APPROX = "approx"


@dataclass(frozen=True)
class PartnerSet:
    """A partner clause and the positions of its literals that may resolve with L."""

    clause: Clause
    positions: Tuple[int, ...]


def partner_set(c: Clause, l_pos: int, d: Clause, mode: str = NOEQ) -> PartnerSet:
    L = c.literals[l_pos]
    positions = []
    for j, n in enumerate(d.literals):
        if n.predicate != L.predicate or n.positive == L.positive:
            continue
        if mode == NOEQ and literal_set_mgu(L, [n]) is None:
            continue
        positions.append(j)
    return PartnerSet(d, tuple(positions))


def _tick(stats: Optional[Counter], key: str, n: int = 1) -> None:
    if stats is not None:
        stats[key] += n


# ----------------------------------------------------------- without equality


def all_l_resolvents_valid(
    c: Clause, l_pos: int, partner: PartnerSet, stats: Optional[Counter] = None
) -> bool:
    """Polynomial check that every L-resolvent of ``c`` with the partner is valid.

    Each seed ``{N_k}`` is grown only by partner literals that take part in
    every complementary pair of the current resolvent; a resolvent without any
    complementary pair is a counterexample.
    """
    L = c.literals[l_pos]
    if L.is_equality:
        raise ValueError("blocking on an equality literal needs equality mode")
    d = partner.clause
    partner_pos = set(partner.positions)
    c_rest = c.without([l_pos])
    for k in partner.positions:
        chosen = {k}
        while True:
            closure = unification_closure(L, [d.literals[j] for j in sorted(chosen)])
            if closure is None:
                break
            _tick(stats, "validity_tests")
            rest: List[Tuple[Optional[int], Literal]] = [(None, l) for l in c_rest]
            rest += [(j, l) for j, l in enumerate(d.literals) if j not in chosen]
            pairs = [
                (a, b)
                for i, a in enumerate(rest)
                for b in rest[i + 1 :]
                if complementary_under(closure, a[1], b[1])
            ]
            if not pairs:
                return False
            grow = set()
            for (ja, _), (jb, _) in pairs:
                hit = {j for j in (ja, jb) if j is not None and j in partner_pos}
                if not hit:
                    grow = None
                    break
                grow |= hit
            if grow is None:
                break
            chosen |= grow
    return True


def brute_force_l_resolvents_valid(c: Clause, l_pos: int, partner: PartnerSet) -> bool:
    """Reference check over all 2^n - 1 selections, using explicit mgus."""
    pos = partner.positions
    for r in range(1, len(pos) + 1):
        for subset in combinations(pos, r):
            res = l_resolvent(c, l_pos, partner.clause, subset)
            if res is not None and not is_valid_noeq(res, syntactic_equality=True):
                return False
    return True


# -------------------------------------------------------------- with equality


def _eq_valid(guards, body, validity: str, stats: Optional[Counter]) -> bool:
    _tick(stats, "validity_tests")
    if validity == APPROX:
        return approx_valid(guards, body)
    return is_valid_eq([neq(x, t) for x, t in guards] + list(body))


def all_flat_l_resolvents_valid(
    c: Clause,
    l_pos: int,
    partner: PartnerSet,
    stats: Optional[Counter] = None,
    validity: str = EXACT,
) -> bool:
    """Equational counterpart of :func:`all_l_resolvents_valid` over flat resolvents.

    Unification always succeeds here. When a resolvent is valid we test
    whether it stays valid with every unselected partner literal dropped
    (then no superset needs a visit) and otherwise grow the selection by each
    partner literal that alone restores validity.
    """
    L = c.literals[l_pos]
    if L.is_equality:
        raise ValueError("equality literals never equality-block a clause")
    d = partner.clause
    partner_pos = set(partner.positions)
    for k in partner.positions:
        chosen = {k}
        while True:
            fr = flat_l_resolvent(c, l_pos, d, sorted(chosen))
            if not _eq_valid(fr.guards, fr.body, validity, stats):
                return False
            idx = [i for i, (side, j) in enumerate(fr.origin) if side == "d" and j in partner_pos]
            if not idx:
                break
            drop = set(idx)
            base = [l for i, l in enumerate(fr.body) if i not in drop]
            if _eq_valid(fr.guards, base, validity, stats):
                break
            grow = set()
            for i in idx:
                if _eq_valid(fr.guards, base + [fr.body[i]], validity, stats):
                    grow.add(fr.origin[i][1])
            if not grow:
                # validity hinges on several unselected partner literals at once:
                # settle every superset of the current selection directly
                if not _supersets_valid(c, l_pos, d, chosen, [fr.origin[i][1] for i in idx], validity, stats):
                    return False
                break
            chosen |= grow
    return True


def _supersets_valid(c, l_pos, d, chosen, extra, validity, stats) -> bool:
    for r in range(1, len(extra) + 1):
        for more in combinations(extra, r):
            fr = flat_l_resolvent(c, l_pos, d, sorted(chosen | set(more)))
            if not _eq_valid(fr.guards, fr.body, validity, stats):
                return False
    return True


def brute_force_flat_l_resolvents_valid(c: Clause, l_pos: int, partner: PartnerSet) -> bool:
    pos = partner.positions
    for r in range(1, len(pos) + 1):
        for subset in combinations(pos, r):
            if not is_valid_eq(flat_l_resolvent(c, l_pos, partner.clause, subset).clause):
                return False
    return True


# ------------------------------------------------------------- approximation


def approx_partner_check(
    c: Clause,
    l_pos: int,
    d: Clause,
    n_pos: int,
    mode: str = NOEQ,
    stats: Optional[Counter] = None,
    validity: str = EXACT,
) -> bool:
    """Binary (flat) resolvent validity after discarding literals that could
    join a larger resolvent on L.

    In ``noeq`` mode the discarded literals are those unifiable with the
    complement of Lσ; in ``eq`` mode, those sharing the predicate and
    polarity of the complement of L.
    """
    L = c.literals[l_pos]
    N = d.literals[n_pos]
    if N.predicate != L.predicate or N.positive == L.positive:
        return True
    if mode == EQ:
        if L.is_equality:
            return False
        fr = flat_l_resolvent(c, l_pos, d, [n_pos])
        target = L.complement()
        body = [
            l
            for l in fr.body
            if not (l.predicate == target.predicate and l.positive == target.positive)
        ]
        return _eq_valid(fr.guards, body, validity, stats)
    sigma = literal_set_mgu(L, [N])
    if sigma is None:
        return True
    _tick(stats, "validity_tests")
    lbar = apply_subst(L.complement(), sigma)
    rest = apply_subst(c.without([l_pos]) + d.without([n_pos]), sigma)
    kept = [
        l
        for l in rest
        if not (
            l.predicate == lbar.predicate
            and l.positive == lbar.positive
            and try_mgu([(l, lbar)]) is not None
        )
    ]
    return is_valid_noeq(kept, syntactic_equality=True)


# ----------------------------------------------------------------- top level


def partner_check(
    c: Clause,
    l_pos: int,
    d: Clause,
    mode: str,
    strategy: str = EXACT,
    stats: Optional[Counter] = None,
    validity: str = EXACT,
) -> bool:
    """Are all (flat) L-resolvents of ``c`` with the single partner ``d`` valid?"""
    ps = partner_set(c, l_pos, d, mode)
    if not ps.positions:
        return True
    _tick(stats, "partner_checks")
    if strategy == APPROX:
        return all(approx_partner_check(c, l_pos, d, j, mode, stats, validity) for j in ps.positions)
    if mode == EQ:
        return all_flat_l_resolvents_valid(c, l_pos, ps, stats, validity)
    return all_l_resolvents_valid(c, l_pos, ps, stats)


def is_blocked(
    f: Formula,
    c: Clause,
    l_pos: int,
    mode: str = NOEQ,
    strategy: str = EXACT,
    *,
    validity: str = EXACT,
    stats: Optional[Counter] = None,
) -> bool:
    """Does literal ``l_pos`` (equality-)block ``c`` in ``f``?"""
    if c.id is None or c.id not in f:
        raise ValueError("clause is not in the formula")
    c = f.get(c.id)
    L = c.literals[l_pos]
    if mode == EQ and L.is_equality:
        return False
    if mode == NOEQ and L.is_equality:
        raise ValueError("equality literal in noeq mode")
    cvars = c.variables()
    for d in f.clauses():
        if d.id == c.id:
            continue
        if any(v in cvars for v in d.variables()):
            d = rename_apart(d, f.counter)
        if not partner_check(c, l_pos, d, mode, strategy, stats, validity):
            return False
    return True


def blocking_literals(f: Formula, c: Clause, mode: str = NOEQ, strategy: str = EXACT) -> List[int]:
    return [i for i in range(len(c)) if is_blocked(f, c, i, mode, strategy)]
