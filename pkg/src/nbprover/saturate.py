"""Given-clause saturation with binary resolution and factoring.

Unprocessed clauses sit in a max-priority queue keyed by
``R(c, F) = r_atp(c) + r(N(c), F)``: a classic size/age score plus the Naive
Bayes rank of the clause's normalised label.  The rank is computed once, when
the clause is inserted, against the prover state at that moment.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .bayes import ClassifierData, GuidanceParams
from .clauses import (
    App, Clause, Literal, PostprocMode, Problem, Term, Var, clause_symbols, clause_vars,
    is_skolem, label_of, map_term, rename_clause_vars, serialize_clause, symbol_count,
    symbol_feature, _canonical_order,
)


class FeatureMode(str, Enum):
    EMPTY = "empty"
    PROBLEM_AXIOMS = "problem-axioms"
    PROCESSED_SYMBOLS = "processed-symbols"

    @classmethod
    def _missing_(cls, value):
        if value == "axioms":
            return cls.PROBLEM_AXIOMS
        return None


class Status(str, Enum):
    REFUTED = "refuted"
    SATURATED = "saturated"
    TIMEOUT = "timeout"
    GIVEN_LIMIT = "given-limit"


@dataclass
class Guidance:
    classifier: ClassifierData
    params: GuidanceParams = field(default_factory=GuidanceParams)


@dataclass
class ProverConfig:
    timeout: float | None = None
    max_given: int | None = 10_000
    w_size: float = 1.0
    w_age: float = 0.0
    guidance: Guidance | None = None
    feature_mode: FeatureMode = FeatureMode.EMPTY
    postproc_mode: PostprocMode = PostprocMode.NONE
    skolem_prefix: str = "sk"

    def __post_init__(self):
        self.feature_mode = FeatureMode(self.feature_mode)
        self.postproc_mode = PostprocMode(self.postproc_mode)
        if not ((self.timeout or 0) > 0 or (self.max_given or 0) > 0):
            raise ValueError("need a positive timeout or max_given")


# --------------------------------------------------------------------------
# unification

Substitution = dict


def _walk(t: Term, s: Substitution) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def _occurs(v: Var, t: Term, s: Substitution) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a, s) for a in t.args)


def apply_subst(t: Term, s: Substitution) -> Term:
    if isinstance(t, Var):
        r = s.get(t)
        return t if r is None else apply_subst(r, s)
    if not t.args:
        return t
    return App(t.symbol, tuple(apply_subst(a, s) for a in t.args))


def unify(t1: Term, t2: Term, s: Substitution | None = None) -> Substitution | None:
    """Most general unifier of ``t1`` and ``t2`` (with occurs check), or None.

    The result is idempotent: no bound variable occurs in any binding.
    """
    s = dict(s or {})
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a, b, s):
                return None
            s[a] = b
        elif isinstance(b, Var):
            if _occurs(b, a, s):
                return None
            s[b] = a
        elif a.symbol != b.symbol or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))
    return {v: apply_subst(t, s) for v, t in s.items()}


# --------------------------------------------------------------------------
# inference rules

def _rename_apart(c: Clause, prefix: str) -> tuple:
    vs = clause_vars(c)
    if not vs:
        return c.literals
    mapping = {v: Var(f"{prefix}{i}") for i, v in enumerate(vs)}
    return tuple(Literal(l.positive, map_term(l.atom, lambda v: mapping[v]))
                 for l in c.literals)


def _instantiate(lits: Iterable[Literal], s: Substitution) -> tuple:
    out: list = []
    for l in lits:
        nl = Literal(l.positive, apply_subst(l.atom, s))
        if nl not in out:
            out.append(nl)
    return tuple(out)


def _derived(lits: tuple, parents: tuple, rule: str) -> Clause:
    c = Clause(lits, origin="derived", parents=parents, rule=rule)
    return rename_clause_vars(c)


def resolve(c1: Clause, c2: Clause) -> list:
    """All binary resolvents of ``c1`` and ``c2``.

    Both parents are renamed apart internally, so ``resolve(c, c)`` resolves
    a clause with a fresh copy of itself.  Identical literals are merged.
    """
    return _resolvents(_rename_apart(c1, "_L"), _rename_apart(c2, "_R"), (c1.id, c2.id))


def _resolvents(left: tuple, right: tuple, parents: tuple) -> list:
    out = []
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            if a.positive == b.positive or a.atom.symbol != b.atom.symbol:
                continue
            s = unify(a.atom, b.atom)
            if s is None:
                continue
            rest = left[:i] + left[i + 1:] + right[:j] + right[j + 1:]
            out.append(_derived(_instantiate(rest, s), parents, "res"))
    return out


def factor(c: Clause) -> list:
    """All factors of ``c`` from unifying two literals of equal polarity."""
    lits = c.literals
    out = []
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            a, b = lits[i], lits[j]
            if a.positive != b.positive or a.atom.symbol != b.atom.symbol:
                continue
            s = unify(a.atom, b.atom)
            if s is None:
                continue
            out.append(_derived(_instantiate(lits, s), (c.id,), "fac"))
    return out


def is_tautology(c: Clause) -> bool:
    pos = {l.atom for l in c.literals if l.positive}
    return any(not l.positive and l.atom in pos for l in c.literals)


def _variant_key(c: Clause) -> str:
    return serialize_clause(rename_clause_vars(c.with_literals(_canonical_order(c))))


# --------------------------------------------------------------------------
# ranking

def r_atp(c: Clause, w_size: float = 1.0, w_age: float = 0.0) -> float:
    """Classic relevance: smaller and older clauses score higher."""
    return -(w_size * symbol_count(c) + w_age * c.age)


def axiom_features(axioms: Iterable[Clause], mode: PostprocMode | str,
                   skolem_prefix: str = "sk") -> frozenset:
    test = is_skolem(skolem_prefix)
    return frozenset(label_of(a, mode, test) for a in axioms)


def symbol_features(clauses: Iterable[Clause]) -> set:
    return {symbol_feature(s) for c in clauses for s in clause_symbols(c)}


def state_features(processed: Iterable[Clause], problem: Problem,
                   mode: FeatureMode | str, postproc_mode: PostprocMode | str = "none",
                   skolem_prefix: str = "sk") -> frozenset:
    """Features characterising the prover state.

    ``empty`` yields no features, ``problem-axioms`` one feature per axiom
    (constant for a problem), ``processed-symbols`` every symbol occurring
    in the conjecture or an already processed clause.
    """
    mode = FeatureMode(mode)
    if mode is FeatureMode.EMPTY:
        return frozenset()
    if mode is FeatureMode.PROBLEM_AXIOMS:
        return axiom_features(problem.axioms, postproc_mode, skolem_prefix)
    return frozenset(symbol_features(problem.conjecture) | symbol_features(processed))


def guided_rank(c: Clause, features: Iterable[int], config: ProverConfig) -> float:
    if config.guidance is None:
        return 0.0
    g = config.guidance
    label = label_of(c, config.postproc_mode, is_skolem(config.skolem_prefix))
    return g.classifier.rank(g.params, label, features)


def clause_rank(c: Clause, features: Iterable[int], config: ProverConfig) -> float:
    return r_atp(c, config.w_size, config.w_age) + guided_rank(c, features, config)


# --------------------------------------------------------------------------
# the loop

@dataclass
class ProofRecord:
    clauses: dict = field(default_factory=dict)     # id -> Clause, in creation order
    processed: list = field(default_factory=list)   # ids in selection order
    refutation: int | None = None
    scores: dict = field(default_factory=dict)      # id -> (R, guided part)

    def ancestors(self, cid: int) -> set:
        seen: set = set()
        stack = [cid]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            stack.extend(self.clauses[i].parents)
        return seen

    def proof_lines(self) -> list:
        out = []
        for cid, c in self.clauses.items():
            rule = c.rule or c.origin
            parents = ",".join(map(str, c.parents)) or "-"
            out.append(f"{cid} {rule} {parents} {serialize_clause(c)}")
        return out


@dataclass
class Stats:
    given: int = 0
    created: int = 0
    wall_time: float = 0.0


@dataclass
class SaturationResult:
    status: Status
    stats: Stats
    record: ProofRecord
    training: "TrainingDatum | None" = None


class _Search:
    def __init__(self, problem: Problem, config: ProverConfig):
        self.problem = problem
        self.config = config
        self.record = ProofRecord()
        self.queue: list = []
        self.seen: set = set()
        self.next_id = 0
        self.processed: list = []
        # (polarity, predicate) -> ids of processed clauses with such a literal
        self.index: dict = {}
        self.renamed: dict = {}
        self.position: dict = {}
        self.sym_features: set = set()
        if config.feature_mode is FeatureMode.PROCESSED_SYMBOLS:
            self.sym_features = symbol_features(problem.conjecture)
        elif config.feature_mode is FeatureMode.PROBLEM_AXIOMS:
            self.axiom_feats = axiom_features(problem.axioms, config.postproc_mode,
                                              config.skolem_prefix)

    def features(self) -> frozenset:
        mode = self.config.feature_mode
        if mode is FeatureMode.EMPTY or self.config.guidance is None:
            return frozenset()
        if mode is FeatureMode.PROBLEM_AXIOMS:
            return self.axiom_feats
        return frozenset(self.sym_features)

    def add(self, c: Clause) -> Clause:
        c = Clause(c.literals, self.next_id, self.next_id, c.origin, c.parents, c.rule,
                   c.name)
        self.next_id += 1
        self.record.clauses[c.id] = c
        if c.is_empty:
            return c
        guided = guided_rank(c, self.features(), self.config)
        score = r_atp(c, self.config.w_size, self.config.w_age) + guided
        self.record.scores[c.id] = (score, guided)
        heapq.heappush(self.queue, (-score, c.id, c))
        return c

    def run(self) -> tuple:
        cfg = self.config
        start = time.monotonic()
        deadline = start + cfg.timeout if cfg.timeout else None
        for c in self.problem.clauses:
            self.seen.add(_variant_key(c))
            added = self.add(Clause(c.literals, origin=c.origin, name=c.name))
            if added.is_empty:
                self.record.refutation = added.id
                return Status.REFUTED, start
        while True:
            if not self.queue:
                return Status.SATURATED, start
            if cfg.max_given and len(self.processed) >= cfg.max_given:
                return Status.GIVEN_LIMIT, start
            if deadline is not None and time.monotonic() >= deadline:
                return Status.TIMEOUT, start
            _, _, given = heapq.heappop(self.queue)
            self.position[given.id] = len(self.processed)
            self.processed.append(given)
            self.record.processed.append(given.id)
            if cfg.feature_mode is FeatureMode.PROCESSED_SYMBOLS:
                self.sym_features |= symbol_features([given])
            new = factor(given)
            left = _rename_apart(given, "_L")
            right = _rename_apart(given, "_R")
            for lit in right:
                self.index.setdefault((lit.positive, lit.atom.symbol), set()).add(given.id)
            self.renamed[given.id] = (given, right)
            partners: set = set()
            for lit in left:
                partners |= self.index.get((not lit.positive, lit.atom.symbol), set())
            for pid in sorted(partners, key=self.position.__getitem__):
                other, other_lits = self.renamed[pid]
                new.extend(_resolvents(left, other_lits, (given.id, pid)))
            for c in new:
                if c.is_empty:
                    self.record.refutation = self.add(c).id
                    return Status.REFUTED, start
                if is_tautology(c):
                    continue
                key = _variant_key(c)
                if key in self.seen:
                    continue
                self.seen.add(key)
                self.add(c)


def given_clause_loop(problem: Problem, config: ProverConfig | None = None) -> SaturationResult:
    """Run the given-clause algorithm on ``problem``.

    The best unprocessed clause (highest rank, lowest id on ties) becomes the
    given clause; its factors and its resolvents with every processed clause
    (itself included) join the queue.  Tautologies and variants of existing
    clauses are dropped.  A training datum is attached on refutation.
    """
    from .training import extract_training

    config = config or ProverConfig()
    search = _Search(problem, config)
    status, start = search.run()
    stats = Stats(given=len(search.processed), created=search.next_id,
                  wall_time=time.monotonic() - start)
    result = SaturationResult(status, stats, search.record)
    if status is Status.REFUTED:
        result.training = extract_training(search.record, problem)
    return result


def prove(problem: Problem, config: ProverConfig | None = None) -> SaturationResult:
    return given_clause_loop(problem, config)
