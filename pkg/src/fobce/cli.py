"""Command-line front end: read TPTP CNF, eliminate blocked clauses, write the rest."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .bce import AUTO, BlockReport, eliminate, eliminate_pure
from .blocked import APPROX, EQ, EXACT, NOEQ
from .core import Formula
from .oracle import DEFAULT_CAP, DEFAULT_DEPTH, Redundancy, check_redundancy
from .tptp import ParseError, ProblemFile, parse_file, print_problem

EMPTY_STATUS = "Satisfiable (formula fully eliminated)"


@dataclass
class RunConfig:
    inputs: List[str]
    output: Optional[str] = None
    mode: str = AUTO
    strategy: str = EXACT
    validity: str = EXACT
    verify: bool = False
    verify_depth: int = DEFAULT_DEPTH
    verify_cap: int = DEFAULT_CAP
    pure_only: bool = False
    delete_tautologies: bool = False
    stats: bool = False
    report: Optional[str] = None
    include_dirs: List[str] = field(default_factory=list)
    time_limit: Optional[float] = None
    unsafe_noeq: bool = False
    jobs: int = 1


class VerificationError(RuntimeError):
    pass


def reduce_problem(problem: ProblemFile, cfg: RunConfig) -> Tuple[Formula, BlockReport]:
    f = problem.formula()
    if cfg.pure_only:
        return eliminate_pure(f)
    return eliminate(
        f,
        cfg.mode,
        cfg.strategy,
        validity=cfg.validity,
        unsafe_noeq=cfg.unsafe_noeq,
        delete_tautologies=cfg.delete_tautologies,
        time_limit=cfg.time_limit,
    )


def verify_eliminations(original: Formula, out: Formula, report: BlockReport, depth: int, cap: int):
    """Check each elimination against the formula it was removed from.

    Returns ``(clause id, verdict)`` pairs; raises on a refutation.
    """
    removed = report.eliminated_ids
    verdicts = []
    for j, cid in enumerate(removed):
        # the formula at elimination time: survivors plus e_j..e_k
        at_time = original.subset(sorted(out.ids() + removed[j:]))
        verdict = check_redundancy(at_time, at_time.get(cid), depth, cap)
        if verdict is Redundancy.REFUTED:
            raise VerificationError(cid)
        verdicts.append((cid, verdict))
    return verdicts


def _process(path: str, cfg: RunConfig, out_path: Optional[str]) -> Tuple[int, str, str]:
    """Returns (exit code, stdout text, stderr text) for a single input."""
    err: List[str] = []
    try:
        problem = parse_file(path, cfg.include_dirs)
    except (OSError, ParseError) as e:
        return 2, "", f"error: {e}\n"
    try:
        reduced, report = reduce_problem(problem, cfg)
    except ValueError as e:
        return 2, "", f"error: {path}: {e}\n"
    names = problem.names()
    original = problem.formula()
    if cfg.verify:
        try:
            verdicts = verify_eliminations(original, reduced, report, cfg.verify_depth, cfg.verify_cap)
        except VerificationError as e:
            cid = e.args[0]
            return 1, "", f"verification failed: {path}: clause {names.get(cid, cid)} is not redundant\n"
        if cfg.stats:
            unknown = sum(v is Redundancy.INCONCLUSIVE for _, v in verdicts)
            err.append(f"verified {len(verdicts) - unknown} eliminations, {unknown} inconclusive\n")
    text = print_problem(problem.restrict(reduced), header=f"reduced from {os.path.basename(path)}")
    if cfg.stats:
        err.append(
            f"{path}: clauses in {report.clauses_in} out {report.clauses_out} "
            f"eliminated {len(report.eliminated)} ({report.percentage:.2f}%) "
            f"candidates {report.candidates_processed} partner checks {report.partner_checks} "
            f"validity tests {report.validity_tests} time {report.elapsed:.4f}s"
            + (" (time limit hit)" if report.timed_out else "")
            + "\n"
        )
    if not len(reduced):
        err.append(EMPTY_STATUS + "\n")
    if cfg.report:
        report_path = cfg.report
        if len(cfg.inputs) > 1:
            stem, ext = os.path.splitext(cfg.report)
            report_path = f"{stem}.{os.path.splitext(os.path.basename(path))[0]}{ext}"
        body = report.to_json(original, names) if report_path.endswith(".json") else report.to_text(original, names)
        try:
            with open(report_path, "w", encoding="utf-8") as fh:
                fh.write(body)
        except OSError as e:
            return 2, "", f"error: {e}\n"
    if out_path is None:
        return 0, text, "".join(err)
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        return 2, "", f"error: {e}\n"
    return 0, "", "".join(err)


def _output_for(cfg: RunConfig, path: str) -> Optional[str]:
    if cfg.output is None:
        return None
    if len(cfg.inputs) > 1:
        return os.path.join(cfg.output, os.path.basename(path))
    return cfg.output


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.output is not None and len(cfg.inputs) > 1:
        os.makedirs(cfg.output, exist_ok=True)
    jobs = [(p, cfg, _output_for(cfg, p)) for p in cfg.inputs]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_process, *zip(*jobs)))
    else:
        results = [_process(*j) for j in jobs]
    status = 0
    for code, out, err in results:
        stdout.write(out)
        stderr.write(err)
        status = max(status, code)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fobce", description="Blocked-clause elimination for first-order CNF problems in TPTP syntax."
    )
    p.add_argument("inputs", nargs="+", metavar="FILE", help="TPTP CNF problem file(s)")
    p.add_argument("--mode", choices=[AUTO, NOEQ, EQ], default=AUTO)
    p.add_argument("--strategy", choices=[EXACT, APPROX], default=EXACT)
    p.add_argument(
        "--eq-validity",
        choices=[EXACT, APPROX],
        default=EXACT,
        help="validity test for flat resolvents: congruence closure or the cheap guard-only check",
    )
    p.add_argument("--verify", action="store_true", help="check every elimination with the ground oracle")
    p.add_argument("--verify-depth", type=int, default=DEFAULT_DEPTH, metavar="N")
    p.add_argument("--verify-cap", type=int, default=DEFAULT_CAP, metavar="N", help="ground instance cap")
    p.add_argument("--pure-only", action="store_true", help="only remove clauses with pure predicates")
    p.add_argument("--delete-tautologies", action="store_true")
    p.add_argument("--stats", action="store_true", help="print statistics to stderr")
    p.add_argument("--report", metavar="PATH", help="write a per-elimination report (JSON if PATH ends in .json)")
    p.add_argument("--output", metavar="PATH", help="output file, or directory for several inputs")
    p.add_argument("--include-dir", action="append", default=[], metavar="PATH")
    p.add_argument("--time-limit", type=float, metavar="SECONDS")
    p.add_argument("--unsafe-noeq", action="store_true", help="allow noeq mode on problems with equality")
    p.add_argument("--jobs", type=int, default=1, help="process files in parallel")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        inputs=list(args.inputs),
        output=args.output,
        mode=args.mode,
        strategy=args.strategy,
        validity=args.eq_validity,
        verify=args.verify,
        verify_depth=args.verify_depth,
        verify_cap=args.verify_cap,
        pure_only=args.pure_only,
        delete_tautologies=args.delete_tautologies,
        stats=args.stats,
        report=args.report,
        include_dirs=list(args.include_dir),
        time_limit=args.time_limit,
        unsafe_noeq=args.unsafe_noeq,
        jobs=max(1, args.jobs),
    )
    return run(cfg)
