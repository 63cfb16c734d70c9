"""Training data: post-mortem extraction, postprocessing, examples, files.

A training datum records one successful proof search: the problem's
conjecture and axioms, the processed clauses in selection order, and which
of them were ancestors of the empty clause.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .bayes import NEGATIVE, POSITIVE, ClassifierData, ExampleTriple, merge
from .clauses import (
    Clause, ParseError, PostprocMode, Problem, contains_skolem, is_skolem, label_of,
    normalize_all, normalize_skolem, parse_clause, serialize_clause,
)
from .saturate import FeatureMode, ProofRecord, axiom_features, symbol_features


@dataclass
class TrainingDatum:
    problem_name: str
    conjecture: tuple = ()
    axioms: tuple = ()
    processed: tuple = ()   # (Clause, used) pairs in processing order

    @property
    def clauses(self) -> list:
        return [c for c, _ in self.processed]

    @property
    def used(self) -> list:
        return [c for c, u in self.processed if u]

    @property
    def unused(self) -> list:
        return [c for c, u in self.processed if not u]


class NoRefutationError(ValueError):
    pass


def extract_training(record: ProofRecord, problem: Problem) -> TrainingDatum:
    """Build the datum of a refutation; unprocessed clauses are ignored."""
    if record.refutation is None:
        raise NoRefutationError(f"{problem.name}: no empty clause in proof record")
    proof = record.ancestors(record.refutation)
    processed = tuple((record.clauses[i], i in proof) for i in record.processed)
    return TrainingDatum(problem.name, tuple(problem.conjecture), tuple(problem.axioms),
                         processed)


def postprocess(d: TrainingDatum, mode: PostprocMode | str,
                skolem_prefix: str = "sk") -> TrainingDatum:
    mode = PostprocMode(mode)
    test = is_skolem(skolem_prefix)
    if mode is PostprocMode.NONE:
        kept = d.processed
    elif mode is PostprocMode.SKOLEM_FILTER:
        kept = tuple((c, u) for c, u in d.processed if not contains_skolem(c, test))
    elif mode is PostprocMode.CONSISTENT_SKOLEM:
        kept = tuple((normalize_skolem(c, test), u) for c, u in d.processed)
    elif mode is PostprocMode.CONSISTENT_NORMAL:
        kept = tuple((normalize_all(c), u) for c, u in d.processed)
    else:
        initial = set(d.axioms) | set(d.conjecture)
        kept = tuple((c, u) for c, u in d.processed if c in initial)
    return TrainingDatum(d.problem_name, d.conjecture, d.axioms, kept)


def replay_features(d: TrainingDatum, feature_mode: FeatureMode | str,
                    postproc_mode: PostprocMode | str = PostprocMode.NONE,
                    skolem_prefix: str = "sk") -> list:
    """Features of the prover state at each processed clause, reconstructed
    from the stored processing order."""
    mode = FeatureMode(feature_mode)
    n = len(d.processed)
    if mode is FeatureMode.EMPTY:
        return [frozenset()] * n
    if mode is FeatureMode.PROBLEM_AXIOMS:
        return [axiom_features(d.axioms, postproc_mode, skolem_prefix)] * n
    acc = symbol_features(d.conjecture)
    out = []
    for c, _ in d.processed:
        out.append(frozenset(acc))
        acc |= symbol_features([c])
    return out


def to_examples(d: TrainingDatum, feature_mode: FeatureMode | str = FeatureMode.EMPTY,
                postproc_mode: PostprocMode | str = PostprocMode.NONE,
                skolem_prefix: str = "sk") -> list:
    """One triple per processed clause: (1,0) if used in the proof, else (0,1)."""
    test = is_skolem(skolem_prefix)
    feats = replay_features(d, feature_mode, postproc_mode, skolem_prefix)
    return [ExampleTriple(f, label_of(c, postproc_mode, test), POSITIVE if u else NEGATIVE)
            for (c, u), f in zip(d.processed, feats)]


def classifier_from_data(data: Iterable[TrainingDatum],
                         postproc_mode: PostprocMode | str = PostprocMode.NONE,
                         feature_mode: FeatureMode | str = FeatureMode.EMPTY,
                         skolem_prefix: str = "sk") -> ClassifierData:
    out = ClassifierData()
    for d in data:
        d = postprocess(d, postproc_mode, skolem_prefix)
        out.train_all(to_examples(d, feature_mode, postproc_mode, skolem_prefix))
    return out


def build_classifier(paths: Iterable, postproc_mode: PostprocMode | str = PostprocMode.NONE,
                     feature_mode: FeatureMode | str = FeatureMode.EMPTY,
                     skolem_prefix: str = "sk") -> ClassifierData:
    """Classifier of the multiset union of all training files."""
    out = ClassifierData()
    for p in paths:
        part = classifier_from_data(load_training(p), postproc_mode, feature_mode,
                                    skolem_prefix)
        out = merge(out, part)
    return out


# --------------------------------------------------------------------------
# file format

MAGIC = "tdatum v1"
_CONJ_SEP = " & "


class TrainingFormatError(ValueError):
    pass


def dumps_training(d: TrainingDatum) -> str:
    conj = _CONJ_SEP.join(serialize_clause(c) for c in d.conjecture) or "-"
    lines = [MAGIC, f"problem {d.problem_name}", f"conjecture {conj}",
             f"axioms {len(d.axioms)}"]
    lines += [serialize_clause(c) for c in d.axioms]
    lines.append(f"processed {len(d.processed)}")
    lines += [("+ " if u else "- ") + serialize_clause(c) for c, u in d.processed]
    return "\n".join(lines) + "\n"


def loads_training(text: str, source: str = "<string>") -> list:
    """Parse one or more concatenated training data."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    pos = 0
    out = []

    def fail(msg: str):
        raise TrainingFormatError(f"{source}:{pos + 1}: {msg}")

    def take(prefix: str) -> str:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(prefix):
            fail(f"expected {prefix.strip()!r}")
        val = lines[pos][len(prefix):]
        pos += 1
        return val

    def clause(text: str, origin: str = "axiom") -> Clause:
        try:
            return parse_clause(text, origin=origin)
        except ParseError as e:
            fail(f"bad clause: {e}")

    def count(prefix: str) -> int:
        val = take(prefix)
        if not val.isdigit():
            fail(f"expected count after {prefix.strip()!r}")
        return int(val)

    while pos < len(lines):
        if lines[pos] != MAGIC:
            if lines[pos].startswith("tdatum "):
                fail(f"unsupported version {lines[pos]!r}")
            fail(f"expected header {MAGIC!r}")
        pos += 1
        name = take("problem ")
        conj_text = take("conjecture ")
        conj = () if conj_text == "-" else tuple(
            clause(t, "negated_conjecture") for t in conj_text.split(_CONJ_SEP))
        k = count("axioms ")
        axioms = []
        for _ in range(k):
            if pos >= len(lines):
                fail("truncated axioms")
            axioms.append(clause(lines[pos]))
            pos += 1
        m = count("processed ")
        processed = []
        for _ in range(m):
            if pos >= len(lines):
                fail("truncated processed clauses")
            line = lines[pos]
            if line[:2] not in ("+ ", "- "):
                fail("processed line must start with '+ ' or '- '")
            processed.append((clause(line[2:], "derived"), line[0] == "+"))
            pos += 1
        out.append(TrainingDatum(name, conj, tuple(axioms), tuple(processed)))
    return out


def save_training(path, d: TrainingDatum) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_training(d))


def load_training(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return loads_training(fh.read(), os.fspath(path))


def load_training_one(path) -> TrainingDatum:
    data = load_training(path)
    if len(data) != 1:
        raise TrainingFormatError(f"{path}: expected one datum, found {len(data)}")
    return data[0]
