"""Fixpoint elimination of (equality-)blocked clauses."""

from __future__ import annotations

import heapq
import json
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

from .blocked import APPROX, EQ, EXACT, NOEQ, partner_check
from .core import Formula, Symbol
from .resolve import is_valid_eq, is_valid_noeq

AUTO = "auto"

OrderKey = Callable[[int, int, int], object]


class OccurrenceIndex:
    """Literal occurrences of live clauses keyed by (predicate, polarity)."""

    def __init__(self):
        self.entries: Dict[Tuple[Symbol, bool], Set[Tuple[int, int]]] = defaultdict(set)
        self.live: Set[int] = set()

    def add_clause(self, clause) -> None:
        self.live.add(clause.id)
        for pos, l in enumerate(clause.literals):
            self.entries[(l.predicate, l.positive)].add((clause.id, pos))

    def remove_clause(self, clause) -> None:
        self.live.discard(clause.id)
        for pos, l in enumerate(clause.literals):
            key = (l.predicate, l.positive)
            bucket = self.entries.get(key)
            if bucket is not None:
                bucket.discard((clause.id, pos))
                if not bucket:
                    del self.entries[key]

    def count(self, predicate: Symbol, positive: bool) -> int:
        return len(self.entries.get((predicate, positive), ()))

    def clauses_with(self, predicate: Symbol, positive: bool) -> Set[int]:
        return {cid for cid, _ in self.entries.get((predicate, positive), ())}

    def as_dict(self) -> Dict[Tuple[Symbol, bool], Set[Tuple[int, int]]]:
        return {k: set(v) for k, v in self.entries.items() if v}


def build_index(f: Formula) -> OccurrenceIndex:
    idx = OccurrenceIndex()
    for c in f.clauses():
        idx.add_clause(c)
    return idx


@dataclass
class Elimination:
    clause_id: int
    literal_pos: Optional[int]
    partner_count: int
    reason: str = "blocked"


@dataclass
class BlockReport:
    mode: str = NOEQ
    strategy: str = EXACT
    clauses_in: int = 0
    clauses_out: int = 0
    eliminated: List[Elimination] = field(default_factory=list)
    candidates_processed: int = 0
    partner_checks: int = 0
    validity_tests: int = 0
    elapsed: float = 0.0
    timed_out: bool = False

    @property
    def eliminated_ids(self) -> List[int]:
        return [e.clause_id for e in self.eliminated]

    @property
    def percentage(self) -> float:
        if not self.clauses_in:
            return 0.0
        return 100.0 * len(self.eliminated) / self.clauses_in

    def records(self, original: Optional[Formula] = None, names: Optional[Dict[int, str]] = None):
        from .tptp import clause_var_names, format_literal

        names = names or {}
        for e in self.eliminated:
            rec = {
                "clause": names.get(e.clause_id, str(e.clause_id)),
                "reason": e.reason,
                "partner_tests": e.partner_count,
                "literal": None,
            }
            if original is not None and e.literal_pos is not None and e.clause_id in original:
                clause = original.get(e.clause_id)
                rec["literal"] = format_literal(clause.literals[e.literal_pos], clause_var_names(clause))
            yield rec

    def to_text(self, original: Optional[Formula] = None, names: Optional[Dict[int, str]] = None) -> str:
        lines = [
            f"mode {self.mode} strategy {self.strategy}",
            f"clauses in {self.clauses_in} out {self.clauses_out} "
            f"eliminated {len(self.eliminated)} ({self.percentage:.2f}%)",
        ]
        for rec in self.records(original, names):
            lit = rec["literal"] if rec["literal"] is not None else "-"
            lines.append(f"{rec['reason']} {rec['clause']} on {lit} partners {rec['partner_tests']}")
        return "\n".join(lines) + "\n"

    def to_json(self, original: Optional[Formula] = None, names: Optional[Dict[int, str]] = None) -> str:
        doc = {
            "mode": self.mode,
            "strategy": self.strategy,
            "clauses_in": self.clauses_in,
            "clauses_out": self.clauses_out,
            "candidates_processed": self.candidates_processed,
            "partner_checks": self.partner_checks,
            "validity_tests": self.validity_tests,
            "timed_out": self.timed_out,
            "eliminations": list(self.records(original, names)),
        }
        return json.dumps(doc, indent=2) + "\n"


def resolve_mode(f: Formula, mode: str, unsafe_noeq: bool = False) -> str:
    if mode == AUTO:
        return EQ if f.contains_equality else NOEQ
    if mode == NOEQ and f.contains_equality and not unsafe_noeq:
        raise ValueError(
            "plain blocking is unsound in the presence of equality; "
            "use eq mode or pass unsafe_noeq=True"
        )
    if mode not in (EQ, NOEQ):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


@dataclass
class _Cursor:
    partners: List[int]
    next: int = 0
    tried: int = 0


def eliminate(
    f: Formula,
    mode: str = AUTO,
    strategy: str = EXACT,
    *,
    validity: str = EXACT,
    unsafe_noeq: bool = False,
    delete_tautologies: bool = False,
    order: Optional[OrderKey] = None,
    time_limit: Optional[float] = None,
) -> Tuple[Formula, BlockReport]:
    """Remove blocked clauses until none is left.

    Candidates ``(clause id, literal position)`` are popped from a priority
    queue (fewest opposite-polarity occurrences first, unless ``order`` maps
    ``(clause id, position, priority)`` to another key). A candidate that
    meets a partner with a non-valid resolvent waits on that partner and is
    requeued, resuming after it, once the partner is eliminated.
    """
    if strategy not in (EXACT, APPROX):
        raise ValueError(f"unknown strategy {strategy!r}")
    mode = resolve_mode(f, mode, unsafe_noeq)
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit
    work = f.copy()
    report = BlockReport(mode=mode, strategy=strategy, clauses_in=len(f))
    index = build_index(work)
    stats: Counter = Counter()

    if delete_tautologies:
        for c in work.clauses():
            if is_valid_eq(c) if mode == EQ else is_valid_noeq(c, syntactic_equality=True):
                work.remove(c.id)
                index.remove_clause(c)
                report.eliminated.append(Elimination(c.id, None, 0, "tautology"))

    heap: list = []
    seq = 0
    cursors: Dict[Tuple[int, int], _Cursor] = {}
    parked: Dict[int, List[Tuple[int, int]]] = defaultdict(list)

    def push(cid: int, pos: int) -> None:
        nonlocal seq
        l = work.get(cid).literals[pos]
        prio = index.count(l.predicate, not l.positive)
        key = (prio, cid, pos) if order is None else order(cid, pos, prio)
        heapq.heappush(heap, (key, seq, cid, pos))
        seq += 1

    for c in work.clauses():
        for pos, l in enumerate(c.literals):
            # never a blocking literal; with unsafe_noeq, = is otherwise uninterpreted
            if l.is_equality:
                continue
            push(c.id, pos)

    while heap:
        if deadline is not None and time.perf_counter() > deadline:
            report.timed_out = True
            break
        _, _, cid, pos = heapq.heappop(heap)
        if cid not in work:
            continue
        report.candidates_processed += 1
        c = work.get(cid)
        L = c.literals[pos]
        cur = cursors.get((cid, pos))
        if cur is None:
            partners = sorted(index.clauses_with(L.predicate, not L.positive) - {cid})
            cur = cursors[(cid, pos)] = _Cursor(partners)
        blocked = True
        while cur.next < len(cur.partners):
            did = cur.partners[cur.next]
            cur.next += 1
            if did not in work:
                continue
            cur.tried += 1
            if not partner_check(c, pos, work.get(did), mode, strategy, stats, validity):
                parked[did].append((cid, pos))
                blocked = False
                break
        if not blocked:
            continue
        work.remove(cid)
        index.remove_clause(c)
        report.eliminated.append(Elimination(cid, pos, cur.tried))
        for waiting in parked.pop(cid, ()):
            if waiting[0] in work:
                push(*waiting)

    report.clauses_out = len(work)
    report.partner_checks = stats["partner_checks"]
    report.validity_tests = stats["validity_tests"]
    report.elapsed = time.perf_counter() - start
    return work, report


def pure_predicates(f: Formula) -> Set[Symbol]:
    """Non-equality predicates occurring with a single polarity."""
    seen: Dict[Symbol, Set[bool]] = defaultdict(set)
    for c in f.clauses():
        for l in c.literals:
            if not l.is_equality:
                seen[l.predicate].add(l.positive)
    return {p for p, pols in seen.items() if len(pols) == 1}


def eliminate_pure(f: Formula) -> Tuple[Formula, BlockReport]:
    """Repeatedly delete clauses containing a pure predicate."""
    start = time.perf_counter()
    work = f.copy()
    report = BlockReport(mode="pure", strategy=EXACT, clauses_in=len(f))
    index = build_index(work)
    while True:
        removed = False
        for c in work.clauses():
            for pos, l in enumerate(c.literals):
                if l.is_equality:
                    continue
                if index.count(l.predicate, not l.positive) == 0:
                    work.remove(c.id)
                    index.remove_clause(c)
                    report.eliminated.append(Elimination(c.id, pos, 0, "pure"))
                    removed = True
                    break
        if not removed:
            break
    report.clauses_out = len(work)
    report.elapsed = time.perf_counter() - start
    return work, report
