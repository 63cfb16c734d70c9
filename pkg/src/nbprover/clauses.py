"""First-order CNF objects, a TPTP-CNF subset parser and clause normalisation.

Terms are immutable: a :class:`Var` or an :class:`App` (constants are
zero-argument applications).  Clauses carry identity and provenance but
compare equal when their literal sequences are equal, so a clause loaded
back from a training file equals the clause the prover produced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Union


class PostprocMode(str, Enum):
    NONE = "none"
    SKOLEM_FILTER = "skolem-filter"
    CONSISTENT_SKOLEM = "consistent-skolem"
    CONSISTENT_NORMAL = "consistent-normal"
    INFERENCE_FILTER = "inference-filter"


DEFAULT_SKOLEM_PREFIX = "sk"
EMPTY_CLAUSE_TOKEN = "$false"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    symbol: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]


@dataclass(frozen=True, slots=True)
class Literal:
    positive: bool
    atom: App

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"~{self.atom}"

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals.

    ``origin`` is one of ``axiom``, ``negated_conjecture`` or ``derived``;
    derived clauses name their ``parents`` and the ``rule`` (``res``/``fac``).
    """

    literals: tuple
    id: int = field(default=-1, compare=False)
    age: int = field(default=-1, compare=False)
    origin: str = field(default="axiom", compare=False)
    parents: tuple = field(default=(), compare=False)
    rule: str | None = field(default=None, compare=False)
    name: str | None = field(default=None, compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def __str__(self) -> str:
        return serialize_clause(self)

    def __len__(self) -> int:
        return len(self.literals)

    def with_literals(self, literals: Iterable[Literal]) -> "Clause":
        return Clause(tuple(literals), self.id, self.age, self.origin,
                      self.parents, self.rule, self.name)


@dataclass
class Problem:
    name: str
    clauses: list

    @property
    def axioms(self) -> list:
        return [c for c in self.clauses if c.origin == "axiom"]

    @property
    def conjecture(self) -> list:
        return [c for c in self.clauses if c.origin == "negated_conjecture"]


# --------------------------------------------------------------------------
# traversal helpers

def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from term_vars(a)


def term_symbols(t: Term) -> Iterator[str]:
    if isinstance(t, App):
        yield t.symbol
        for a in t.args:
            yield from term_symbols(a)


def clause_symbols(c: Clause) -> Iterator[str]:
    for lit in c.literals:
        yield from term_symbols(lit.atom)


def clause_vars(c: Clause) -> list:
    """Variables of ``c`` in first-occurrence order, without repeats."""
    seen: dict = {}
    for lit in c.literals:
        for v in term_vars(lit.atom):
            seen.setdefault(v, None)
    return list(seen)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def symbol_count(c: Clause) -> int:
    """Number of symbol and variable occurrences in ``c``."""
    return sum(term_size(lit.atom) for lit in c.literals)


def map_term(t: Term, var_fn: Callable[[Var], Term],
             sym_fn: Callable[[str], str] = lambda s: s) -> Term:
    if isinstance(t, Var):
        return var_fn(t)
    return App(sym_fn(t.symbol), tuple(map_term(a, var_fn, sym_fn) for a in t.args))


def rename_clause_vars(c: Clause, prefix: str = "X") -> Clause:
    """Rename variables to ``<prefix>1, <prefix>2, ...`` in first-occurrence order."""
    vs = clause_vars(c)
    if not vs:
        return c
    mapping = {v: Var(f"{prefix}{i}") for i, v in enumerate(vs, 1)}
    return c.with_literals(
        Literal(l.positive, map_term(l.atom, lambda v: mapping[v])) for l in c.literals
    )


# --------------------------------------------------------------------------
# serialisation and hashing

def serialize_clause(c: Clause) -> str:
    if not c.literals:
        return EMPTY_CLAUSE_TOKEN
    return "|".join(str(lit) for lit in c.literals)


FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & _MASK64
    return h


def hash_text(text: str) -> int:
    return fnv1a64(text.encode("utf-8"))


# --------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<dollar>\$[a-z][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<squote>'(?:[^'\\]|\\.)*')
  | (?P<punct>[(),|~.])
    """,
    re.VERBOSE,
)


class _Lexer:
    def __init__(self, text: str):
        self.toks: list = []
        pos, line, line_start = 0, 1, 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            col = pos - line_start + 1
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            val = m.group()
            if kind != "ws":
                self.toks.append((kind, val, line, col))
            nl = val.count("\n")
            if nl:
                line += nl
                line_start = m.start() + val.rindex("\n") + 1
            pos = m.end()
        self.i = 0
        self.eof = ("eof", "", line, pos - line_start + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else self.eof

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}",
                             tok[2], tok[3])
        return tok


_ROLES = {"axiom": "axiom", "hypothesis": "axiom",
          "negated_conjecture": "negated_conjecture"}


class _Parser:
    def __init__(self, text: str):
        self.lex = _Lexer(text)
        self.arity: dict = {}

    def _check_arity(self, sym: str, n: int, tok) -> None:
        known = self.arity.setdefault(sym, n)
        if known != n:
            raise ParseError(f"symbol {sym!r} used with arity {n} and {known}",
                             tok[2], tok[3])

    def term(self) -> Term:
        tok = self.lex.next()
        if tok[0] == "upper":
            return Var(tok[1])
        if tok[0] not in ("lower", "int", "squote"):
            raise ParseError(f"expected term, found {tok[1] or 'end of input'!r}",
                             tok[2], tok[3])
        return self._application(tok)

    def _application(self, tok) -> App:
        args: list = []
        if self.lex.peek()[1] == "(":
            self.lex.next()
            args.append(self.term())
            while self.lex.peek()[1] == ",":
                self.lex.next()
                args.append(self.term())
            self.lex.expect(")")
        self._check_arity(tok[1], len(args), tok)
        return App(tok[1], tuple(args))

    def literal(self) -> Literal:
        positive = True
        if self.lex.peek()[1] == "~":
            self.lex.next()
            positive = False
        tok = self.lex.next()
        if tok[0] == "upper":
            raise ParseError("atom must not be a variable", tok[2], tok[3])
        if tok[0] not in ("lower", "squote"):
            raise ParseError(f"expected atom, found {tok[1] or 'end of input'!r}",
                             tok[2], tok[3])
        return Literal(positive, self._application(tok))

    def disjunction(self) -> tuple:
        tok = self.lex.peek()
        if tok[1] == "(":
            self.lex.next()
            lits = self.disjunction()
            self.lex.expect(")")
            return lits
        if tok[0] == "dollar":
            self.lex.next()
            if tok[1] != EMPTY_CLAUSE_TOKEN:
                raise ParseError(f"unsupported defined symbol {tok[1]!r}", tok[2], tok[3])
            return ()
        lits = [self.literal()]
        while self.lex.peek()[1] == "|":
            self.lex.next()
            lits.append(self.literal())
        return tuple(lits)

    def annotated(self, next_id: int) -> Clause:
        self.lex.expect("cnf")
        self.lex.expect("(")
        name_tok = self.lex.next()
        if name_tok[0] not in ("lower", "int", "squote", "upper"):
            raise ParseError("expected clause name", name_tok[2], name_tok[3])
        self.lex.expect(",")
        role_tok = self.lex.next()
        if role_tok[1] not in _ROLES:
            raise ParseError(f"unknown role {role_tok[1]!r}", role_tok[2], role_tok[3])
        self.lex.expect(",")
        lits = self.disjunction()
        self.lex.expect(")")
        self.lex.expect(".")
        return Clause(lits, id=next_id, age=next_id, origin=_ROLES[role_tok[1]],
                      name=name_tok[1])

    def problem(self, name: str) -> Problem:
        clauses: list = []
        while self.lex.peek()[0] != "eof":
            tok = self.lex.peek()
            if tok[1] == "include":
                raise ParseError("include directives are not supported", tok[2], tok[3])
            if tok[1] != "cnf":
                raise ParseError(f"expected 'cnf', found {tok[1]!r}", tok[2], tok[3])
            clauses.append(self.annotated(len(clauses)))
        if not clauses:
            raise ParseError("problem contains no clauses")
        return Problem(name, clauses)


def parse_problem(text: str | bytes, name: str = "problem") -> Problem:
    """Parse a TPTP CNF problem.

    Roles ``axiom`` and ``hypothesis`` become axioms; ``negated_conjecture``
    is kept as such.  Clause ids and ages follow file order.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).problem(name)


def parse_clause(text: str, **kw) -> Clause:
    """Parse a bare clause in canonical form, e.g. ``~q(X)|p(X)`` or ``$false``."""
    p = _Parser(text)
    lits = p.disjunction()
    tok = p.lex.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    return Clause(lits, **kw)


def clause_to_tptp(c: Clause, name: str, role: str) -> str:
    return f"cnf({name}, {role}, {serialize_clause(c)})."


def problem_to_tptp(p: Problem) -> str:
    lines = []
    for i, c in enumerate(p.clauses):
        lines.append(clause_to_tptp(c, c.name or f"c{i}", c.origin))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# normalisation

def is_skolem(prefix: str = DEFAULT_SKOLEM_PREFIX) -> Callable[[str], bool]:
    return lambda sym: sym.startswith(prefix)


def contains_skolem(c: Clause, skolem_test: Callable[[str], bool] | None = None) -> bool:
    test = skolem_test or is_skolem()
    return any(test(s) for s in clause_symbols(c))


def _skeleton(t: Term) -> str:
    if isinstance(t, Var):
        return "V"
    if not t.args:
        return "_"
    return "_(" + ",".join(_skeleton(a) for a in t.args) + ")"


def _canonical_order(c: Clause) -> tuple:
    # stable: literals with equal skeletons keep their stored order
    return tuple(sorted(c.literals,
                        key=lambda l: ("+" if l.positive else "-") + _skeleton(l.atom)))


def _rename_symbols(literals: tuple, should_rename: Callable[[str], bool],
                    rename_vars: bool) -> tuple:
    syms: dict = {}
    vars_: dict = {}

    def sym_fn(s: str) -> str:
        if not should_rename(s):
            return s
        if s not in syms:
            syms[s] = f"c{len(syms) + 1}"
        return syms[s]

    def var_fn(v: Var) -> Term:
        if not rename_vars:
            return v
        if v not in vars_:
            vars_[v] = Var(f"X{len(vars_) + 1}")
        return vars_[v]

    return tuple(Literal(l.positive, map_term(l.atom, var_fn, sym_fn)) for l in literals)


def normalize_skolem(c: Clause, skolem_test: Callable[[str], bool] | None = None) -> Clause:
    """Rename Skolem symbols to ``c1, c2, ...`` by first occurrence.

    Literals are first put into canonical skeleton order so that clauses
    differing only in literal order normalise alike.
    """
    test = skolem_test or is_skolem()
    return c.with_literals(_rename_symbols(_canonical_order(c), test, rename_vars=False))


def normalize_all(c: Clause) -> Clause:
    """Rename every symbol to ``c1, c2, ...`` and every variable to ``X1, X2, ...``."""
    return c.with_literals(_rename_symbols(_canonical_order(c), lambda s: True,
                                           rename_vars=True))


def normal_form(c: Clause, mode: PostprocMode | str,
                skolem_test: Callable[[str], bool] | None = None) -> Clause:
    mode = PostprocMode(mode)
    if mode is PostprocMode.CONSISTENT_SKOLEM:
        return normalize_skolem(c, skolem_test)
    if mode is PostprocMode.CONSISTENT_NORMAL:
        return normalize_all(c)
    return c


def label_of(c: Clause, mode: PostprocMode | str = PostprocMode.NONE,
             skolem_test: Callable[[str], bool] | None = None) -> int:
    """64-bit label of ``c`` under the normalisation chosen by ``mode``.

    The filtering modes label clauses verbatim; filtering is a training-data
    operation.
    """
    return hash_text(serialize_clause(normal_form(c, mode, skolem_test)))


def symbol_feature(sym: str) -> int:
    return hash_text("sym:" + sym)
