"""Naive Bayes relevance ranking over a commutative monoid of occurrences.

Each training triple ``(features, label, occ)`` adds ``occ`` to the label's
total and to every (label, feature) co-occurrence.  ``Occurrence`` is the
pair monoid counting positive and negative uses; :class:`ClassifierData`
only relies on ``+`` and a neutral element, so other commutative monoids
could be plugged in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Protocol

COUNT_LIMIT = 2**63 - 1


class Monoid(Protocol):
    """Commutative monoid of label occurrences: associative, commutative
    ``+`` with a neutral element passed to :class:`ClassifierData` as ``zero``."""

    def __add__(self, other): ...


@dataclass(frozen=True, slots=True)
class Occurrence:
    pos: int = 0
    neg: int = 0

    def __post_init__(self):
        if self.pos < 0 or self.neg < 0:
            raise ValueError(f"negative occurrence count {self}")
        if self.pos > COUNT_LIMIT or self.neg > COUNT_LIMIT:
            raise OverflowError(f"occurrence count saturated: {self}")

    def __add__(self, other: "Occurrence") -> "Occurrence":
        return Occurrence(self.pos + other.pos, self.neg + other.neg)

    def __bool__(self) -> bool:
        return bool(self.pos or self.neg)


ZERO = Occurrence(0, 0)
POSITIVE = Occurrence(1, 0)
NEGATIVE = Occurrence(0, 1)


def monoid_add(a: Occurrence, b: Occurrence) -> Occurrence:
    return a + b


@dataclass(frozen=True)
class ExampleTriple:
    features: frozenset
    label: int
    occ: Occurrence

    def __init__(self, features: Iterable[int], label: int, occ: Occurrence):
        object.__setattr__(self, "features", frozenset(features))
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "occ", occ)


@dataclass
class GuidanceParams:
    c: float = 0.05
    c_p: float = 1.0
    c_n: float = 0.5
    gamma: float = 1.0
    eps: float = 1e-8
    default_rank: float = 0.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")


class EmptyClassifierError(ValueError):
    pass


class UnseenLabelError(KeyError):
    pass


@dataclass
class ClassifierData:
    """Precomputed label totals, label/feature co-occurrences and idf counts."""

    total: int = 0
    label_occ: dict = field(default_factory=dict)
    pair_occ: dict = field(default_factory=dict)
    feature_docs: dict = field(default_factory=dict)
    zero: Monoid = ZERO

    def train(self, t: ExampleTriple) -> "ClassifierData":
        """Add one triple in place and return ``self``."""
        if self.total >= COUNT_LIMIT:
            raise OverflowError("training count saturated")
        self.total += 1
        self.label_occ[t.label] = self.label_occ.get(t.label, self.zero) + t.occ
        for f in t.features:
            key = (t.label, f)
            self.pair_occ[key] = self.pair_occ.get(key, self.zero) + t.occ
            self.feature_docs[f] = self.feature_docs.get(f, 0) + 1
        return self

    def train_all(self, triples: Iterable[ExampleTriple]) -> "ClassifierData":
        for t in triples:
            self.train(t)
        return self

    def copy(self) -> "ClassifierData":
        return ClassifierData(self.total, dict(self.label_occ), dict(self.pair_occ),
                              dict(self.feature_docs), self.zero)

    def __len__(self) -> int:
        return len(self.label_occ)

    # ranking ---------------------------------------------------------------

    def idf(self, f: int) -> float:
        if self.total == 0:
            raise EmptyClassifierError("idf of an empty classifier")
        docs = self.feature_docs.get(f, 0)
        return 1.0 if docs == 0 else self.total / docs

    def p_label(self, params: GuidanceParams, label: int) -> float:
        occ = self.label_occ.get(label)
        if occ is None or not occ:
            raise UnseenLabelError(label)
        p, n = occ.pos, occ.neg
        confidence = abs(p - n) / (p + n)
        return max(params.eps, confidence * (params.c_p * p + params.c_n * n))

    def p_feature_given_label(self, params: GuidanceParams, label: int, f: int) -> float:
        occ = self.label_occ.get(label)
        if occ is None:
            raise UnseenLabelError(label)
        pair = self.pair_occ.get((label, f))
        if pair is None or not pair:
            return params.c
        pos_part = pair.pos / occ.pos if occ.pos else 0.0
        neg_part = pair.neg / occ.neg if occ.neg else 0.0
        return max(params.eps, params.c_p * pos_part + params.c_n * neg_part)

    def rank(self, params: GuidanceParams, label: int, features: Iterable[int] = ()) -> float:
        """Log-domain relevance of ``label`` given ``features``, scaled by gamma.

        Labels the classifier has never seen get ``params.default_rank``.
        """
        occ = self.label_occ.get(label)
        if occ is None or not occ:
            return params.default_rank
        score = math.log(self.p_label(params, label))
        for f in features:
            w = math.log(self.idf(f))
            if w:
                pf = self.p_feature_given_label(params, label, f)
                score += w * math.log(max(params.eps, pf))
        return params.gamma * score


def train(data: ClassifierData, t: ExampleTriple) -> ClassifierData:
    return data.train(t)


def merge(a: ClassifierData, b: ClassifierData) -> ClassifierData:
    """Pointwise sum of two classifiers; neither argument is modified."""
    out = a.copy()
    out.total += b.total
    if out.total > COUNT_LIMIT:
        raise OverflowError("training count saturated")
    for k, v in b.label_occ.items():
        out.label_occ[k] = out.label_occ.get(k, out.zero) + v
    for k, v in b.pair_occ.items():
        out.pair_occ[k] = out.pair_occ.get(k, out.zero) + v
    for k, v in b.feature_docs.items():
        out.feature_docs[k] = out.feature_docs.get(k, 0) + v
    return out


def idf(data: ClassifierData, f: int) -> float:
    return data.idf(f)


def p_label(data: ClassifierData, params: GuidanceParams, label: int) -> float:
    return data.p_label(params, label)


def p_feature_given_label(data: ClassifierData, params: GuidanceParams,
                          label: int, f: int) -> float:
    return data.p_feature_given_label(params, label, f)


def rank(data: ClassifierData, params: GuidanceParams, label: int,
         features: Iterable[int] = ()) -> float:
    return data.rank(params, label, features)


# --------------------------------------------------------------------------
# classifier file

MAGIC = "nbayes v1"


class ClassifierFormatError(ValueError):
    pass


def format_params(params: GuidanceParams) -> str:
    return (f"params c={params.c!r} cp={params.c_p!r} cn={params.c_n!r} "
            f"gamma={params.gamma!r}")


_PARAM_KEYS = {"c": "c", "cp": "c_p", "cn": "c_n", "gamma": "gamma",
               "eps": "eps", "default_rank": "default_rank"}


def parse_params(text: str, base: GuidanceParams | None = None) -> GuidanceParams:
    """Parse ``c=..,cp=..`` (comma or space separated) into params."""
    values = dict(vars(base or GuidanceParams()))
    for item in text.replace(",", " ").split():
        key, sep, val = item.partition("=")
        if not sep or key not in _PARAM_KEYS:
            raise ValueError(f"bad parameter {item!r}")
        values[_PARAM_KEYS[key]] = float(val)
    return GuidanceParams(**values)


def dumps_classifier(data: ClassifierData, params: GuidanceParams) -> str:
    labels = sorted(f"L {l:016x} {o.pos} {o.neg}" for l, o in data.label_occ.items())
    pairs = sorted(f"P {l:016x} {f:016x} {o.pos} {o.neg}"
                   for (l, f), o in data.pair_occ.items())
    feats = sorted(f"F {f:016x} {n}" for f, n in data.feature_docs.items())
    lines = [MAGIC, format_params(params), f"total {data.total}", *labels, *pairs, *feats]
    return "\n".join(lines) + "\n"


def loads_classifier(text: str, source: str = "<string>") -> tuple:
    """Parse a classifier file; returns ``(ClassifierData, GuidanceParams)``."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def fail(i: int, msg: str):
        raise ClassifierFormatError(f"{source}:{i + 1}: {msg}")

    if not lines or lines[0] != MAGIC:
        fail(0, f"expected header {MAGIC!r}")
    if len(lines) < 3 or not lines[1].startswith("params "):
        fail(1, "expected params line")
    try:
        params = parse_params(lines[1][len("params "):])
    except ValueError as e:
        fail(1, str(e))
    head = lines[2].split()
    if len(head) != 2 or head[0] != "total" or not head[1].isdigit():
        fail(2, "expected 'total <int>'")
    data = ClassifierData(total=int(head[1]))
    for i, line in enumerate(lines[3:], 3):
        parts = line.split()
        try:
            if parts[0] == "L" and len(parts) == 4:
                data.label_occ[int(parts[1], 16)] = Occurrence(int(parts[2]), int(parts[3]))
            elif parts[0] == "P" and len(parts) == 5:
                key = (int(parts[1], 16), int(parts[2], 16))
                data.pair_occ[key] = Occurrence(int(parts[3]), int(parts[4]))
            elif parts[0] == "F" and len(parts) == 3:
                data.feature_docs[int(parts[1], 16)] = int(parts[2])
            else:
                fail(i, f"unrecognised line {line!r}")
        except (ValueError, IndexError) as e:
            if isinstance(e, ClassifierFormatError):
                raise
            fail(i, f"malformed line {line!r}")
    for (l, _f) in data.pair_occ:
        if l not in data.label_occ:
            raise ClassifierFormatError(f"{source}: pair for unknown label {l:016x}")
    return data, params


def save_classifier(path, data: ClassifierData, params: GuidanceParams) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_classifier(data, params))


def load_classifier(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return loads_classifier(fh.read(), str(path))
