"""Reading and writing the CNF fragment of TPTP."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    CONSTANT,
    EQUALITY,
    FUNCTION,
    PREDICATE,
    App,
    Clause,
    FreshCounter,
    Formula,
    Literal,
    Term,
    Var,
    intern,
    rename_apart,
    term_vars,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<string>"):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass
class Statement:
    name: str
    role: str
    clause: Clause


@dataclass
class ProblemFile:
    statements: List[Statement] = field(default_factory=list)
    includes: List[str] = field(default_factory=list)
    counter: FreshCounter = field(default_factory=FreshCounter)

    @property
    def clauses(self) -> List[Clause]:
        return [s.clause for s in self.statements]

    @property
    def contains_equality(self) -> bool:
        return detect_equality(self)

    def formula(self) -> Formula:
        return Formula(self.clauses, counter=FreshCounter(self.counter.value))

    def names(self) -> Dict[int, str]:
        return {s.clause.id: s.name for s in self.statements}

    def restrict(self, f: Formula) -> "ProblemFile":
        """The statements whose clauses survive in ``f``, in original order."""
        keep = set(f.ids())
        return ProblemFile(
            [s for s in self.statements if s.clause.id in keep],
            list(self.includes),
            FreshCounter(self.counter.value),
        )


# ------------------------------------------------------------------- lexing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<neq>!=)
  | (?P<sym>[(),.|~=\[\]&:!?<>])
  | (?P<dollar>\$\$?[a-z][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<squote>'(?:[^'\\]|\\.)*')
  | (?P<dquote>"(?:[^"\\]|\\.)*")
  | (?P<number>[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?(?:/\d+)?)
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, source: str) -> List[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# ------------------------------------------------------------------ parsing


class _Parser:
    def __init__(self, text: str, source: str, arities: Dict[Tuple[str, str], int]):
        self.toks = _tokenize(text, source)
        self.i = 0
        self.source = source
        self.arities = arities

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col, self.source)

    def take(self, text: Optional[str] = None, kind: Optional[str] = None) -> _Tok:
        tok = self.peek()
        if text is not None and tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        if kind is not None and tok.kind != kind:
            raise self.error(f"expected {kind}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text:
            self.i += 1
            return True
        return False

    # top level
    def statements(self):
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "lower":
                raise self.error("expected an annotated formula or include")
            if tok.text == "include":
                yield ("include",) + self.include()
            elif tok.text == "cnf":
                yield ("cnf",) + self.cnf()
            elif tok.text in ("fof", "tff", "thf", "tcf", "tpi"):
                raise self.error(f"{tok.text} formulas are not supported; only the CNF dialect is accepted")
            else:
                raise self.error(f"unknown statement {tok.text!r}")

    def include(self):
        self.take("include")
        self.take("(")
        name_tok = self.take(kind="squote")
        selection = None
        if self.accept(","):
            self.take("[")
            selection = []
            if not self.accept("]"):
                selection.append(self.name())
                while self.accept(","):
                    selection.append(self.name())
                self.take("]")
        self.take(")")
        self.take(".")
        return (_unquote(name_tok.text), selection, name_tok)

    def name(self) -> str:
        tok = self.peek()
        if tok.kind in ("lower", "number", "upper"):
            self.i += 1
            return tok.text
        if tok.kind == "squote":
            self.i += 1
            return _unquote(tok.text)
        raise self.error("expected a name")

    def cnf(self):
        self.take("cnf")
        self.take("(")
        name = self.name()
        self.take(",")
        role = self.take(kind="lower").text
        self.take(",")
        varmap: Dict[str, Var] = {}
        lits = self.disjunction(varmap)
        if self.accept(","):
            self.skip_annotations()
        self.take(")")
        self.take(".")
        return (name, role, lits)

    def skip_annotations(self):
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise self.error("unterminated annotations")
            if tok.text in ("(", "["):
                depth += 1
            elif tok.text in (")", "]"):
                if depth == 0:
                    return
                depth -= 1
            self.i += 1

    def disjunction(self, varmap) -> List[Literal]:
        lits = self.disjunct(varmap)
        while self.accept("|"):
            lits += self.disjunct(varmap)
        return lits

    def disjunct(self, varmap) -> List[Literal]:
        if self.accept("("):
            lits = self.disjunction(varmap)
            self.take(")")
            return lits
        if self.accept("~"):
            if self.peek().text == "(":
                self.take("(")
                inner = self.disjunction(varmap)
                self.take(")")
                if len(inner) != 1:
                    raise self.error("negation applies to a single literal in CNF")
                return [inner[0].complement()]
            return [l.complement() for l in self.literal(varmap)]
        return self.literal(varmap)

    def literal(self, varmap) -> List[Literal]:
        tok = self.peek()
        if tok.text == "$false":
            self.i += 1
            return []
        if tok.text == "$true":
            self.i += 1
            true = intern("$true", PREDICATE, 0)
            return [Literal(True, true, ())]
        start = self.i
        left = self.term(varmap, as_atom=True)
        if self.peek().kind == "neq" or self.peek().text == "=":
            positive = self.take().text == "="
            lhs = self._as_term(left, self.toks[start])
            rhs = self.term(varmap)
            return [Literal(positive, EQUALITY, (lhs, rhs))]
        if isinstance(left, Var):
            raise self.error("a variable cannot be used as an atom", self.toks[start])
        name, args = left
        return [Literal(True, self.symbol(name, PREDICATE, len(args), self.toks[start]), args)]

    def _as_term(self, parsed, tok) -> Term:
        if isinstance(parsed, Var):
            return parsed
        name, args = parsed
        kind = FUNCTION if args else CONSTANT
        return App(self.symbol(name, kind, len(args), tok), args)

    def symbol(self, name: str, kind: str, arity: int, tok):
        family = PREDICATE if kind == PREDICATE else "term"
        known = self.arities.setdefault((name, family), arity)
        if known != arity:
            raise self.error(f"symbol {name!r} used with arity {arity} and {known}", tok)
        if kind == PREDICATE and name in ("=", "$false", "$true"):
            raise self.error(f"reserved predicate {name!r}", tok)
        return intern(name, kind, arity)

    def term(self, varmap, as_atom: bool = False):
        tok = self.peek()
        if tok.kind == "upper":
            self.i += 1
            v = varmap.get(tok.text)
            if v is None:
                v = varmap[tok.text] = Var(tok.text)
            return v
        if tok.kind in ("lower", "squote", "dquote", "number", "dollar"):
            self.i += 1
            name = _unquote(tok.text) if tok.kind == "squote" else tok.text
            args: List[Term] = []
            if self.peek().text == "(":
                if tok.kind in ("dquote", "number"):
                    raise self.error("only functors take arguments", tok)
                self.take("(")
                args.append(self.term(varmap))
                while self.accept(","):
                    args.append(self.term(varmap))
                self.take(")")
            parsed = (name, tuple(args))
            return parsed if as_atom else self._as_term(parsed, tok)
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def _unquote(text: str) -> str:
    body = text[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


def parse_problem(
    text: str,
    include_dirs: Sequence[str] = (),
    *,
    source: str = "<string>",
    counter: Optional[FreshCounter] = None,
) -> ProblemFile:
    """Parse TPTP CNF statements, resolving ``include`` directives.

    Every clause is renamed apart on ingestion and given a sequential id.
    """
    counter = counter if counter is not None else FreshCounter()
    problem = ProblemFile(counter=counter)
    arities: Dict[Tuple[str, str], int] = {}
    _parse_into(problem, text, list(include_dirs), source, arities, None, depth=0)
    return problem


def _parse_into(problem, text, include_dirs, source, arities, selection, depth):
    if depth > 32:
        raise ParseError("include nesting too deep", source=source)
    parser = _Parser(text, source, arities)
    for item in parser.statements():
        if item[0] == "include":
            _, fname, sel, tok = item
            path = _resolve_include(fname, include_dirs, source)
            if path is None:
                raise ParseError(f"cannot resolve include {fname!r}", tok.line, tok.col, source)
            problem.includes.append(fname)
            with open(path, encoding="utf-8") as fh:
                inner = fh.read()
            _parse_into(problem, inner, include_dirs, path, arities, sel, depth + 1)
            continue
        _, name, role, lits = item
        if selection is not None and name not in selection:
            continue
        cid = len(problem.statements)
        clause = rename_apart(Clause(lits, cid), problem.counter)
        problem.statements.append(Statement(name, role, clause))


def _resolve_include(fname: str, include_dirs: Sequence[str], source: str) -> Optional[str]:
    candidates = []
    if os.path.isabs(fname):
        candidates.append(fname)
    else:
        candidates.extend(os.path.join(d, fname) for d in include_dirs)
        if source and source != "<string>":
            candidates.append(os.path.join(os.path.dirname(source), fname))
    for c in candidates:
        if os.path.isfile(c):
            return c
    return None


def parse_file(path: str, include_dirs: Sequence[str] = ()) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, include_dirs, source=path)


def parse_clause(text: str, id: Optional[int] = None) -> Clause:
    """Parse a bare TPTP disjunction such as ``p(X) | ~q(a)``."""
    parser = _Parser(text, "<clause>", {})
    lits = parser.disjunction({})
    if parser.peek().kind != "eof":
        raise parser.error("trailing input after clause")
    return Clause(lits, id)


def parse_formula(text: str) -> Formula:
    """Parse clauses separated by newlines or ``&`` into a formula (handy in tests)."""
    parts = [p.strip() for p in re.split(r"[\n&]", text) if p.strip()]
    return Formula(parse_clause(p) for p in parts)


def detect_equality(p) -> bool:
    clauses = p.clauses() if isinstance(p, Formula) else p.clauses
    return any(c.has_equality for c in clauses)


# ----------------------------------------------------------------- printing

_LOWER_WORD = re.compile(r"[a-z][A-Za-z0-9_]*$")
_PLAIN = re.compile(r"(\$\$?[a-z][A-Za-z0-9_]*|\"(?:[^\"\\]|\\.)*\"|[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?(?:/\d+)?)$")


def format_name(name: str) -> str:
    if _LOWER_WORD.match(name) or _PLAIN.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _var_name(i: int) -> str:
    return f"X{i}"


def format_term(t: Term, names: Optional[Dict[Var, str]] = None) -> str:
    if isinstance(t, Var):
        if names is not None and t in names:
            return names[t]
        n = t.name
        return n if n[:1].isupper() else n[:1].upper() + n[1:]
    head = format_name(t.symbol.name)
    if not t.args:
        return head
    return f"{head}({','.join(format_term(a, names) for a in t.args)})"


def format_literal(l: Literal, names: Optional[Dict[Var, str]] = None) -> str:
    if l.is_equality:
        op = "=" if l.positive else "!="
        return f"{format_term(l.args[0], names)} {op} {format_term(l.args[1], names)}"
    head = format_name(l.predicate.name)
    atom = head if not l.args else f"{head}({','.join(format_term(a, names) for a in l.args)})"
    return atom if l.positive else "~" + atom


def clause_var_names(c: Clause) -> Dict[Var, str]:
    names: Dict[Var, str] = {}
    for l in c.literals:
        for a in l.args:
            for v in term_vars(a):
                names.setdefault(v, _var_name(len(names)))
    return names


def format_clause(c: Clause) -> str:
    names = clause_var_names(c)
    if not c.literals:
        return "$false"
    return " | ".join(format_literal(l, names) for l in c.literals)


def print_problem(p, header: str = "CNF problem") -> str:
    """TPTP CNF text; variables are renumbered ``X0, X1, ...`` per clause."""
    if isinstance(p, Formula):
        statements = [Statement(f"c{c.id}", "axiom", c) for c in p.clauses()]
    else:
        statements = p.statements
    lines = [f"% {header}"]
    for s in statements:
        lines.append(f"cnf({format_name(s.name)}, {s.role}, ({format_clause(s.clause)})).")
    return "\n".join(lines) + "\n"
