"""Problem generators: small unsatisfiable families and a synthetic corpus
for measuring the effect of learned guidance."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from .clauses import Problem, parse_problem


def _cnf(name: str, clauses: list) -> str:
    """``clauses`` holds ``(role, text)`` pairs."""
    return "".join(f"cnf(c{i}, {role}, {text}).\n" for i, (role, text) in enumerate(clauses))


def pigeonhole(pigeons: int) -> str:
    """Ground pigeonhole: ``pigeons`` pigeons into ``pigeons - 1`` holes."""
    holes = pigeons - 1
    cl = [("axiom", "|".join(f"in_{i}_{j}" for j in range(holes)))
          for i in range(pigeons)]
    for j in range(holes):
        for a, b in itertools.combinations(range(pigeons), 2):
            cl.append(("axiom", f"~in_{a}_{j}|~in_{b}_{j}"))
    cl[-1] = ("negated_conjecture", cl[-1][1])
    return _cnf(f"php{pigeons}", cl)


def implication_chain(length: int) -> str:
    cl = [("axiom", "p0(a)")]
    cl += [("axiom", f"~p{i}(X)|p{i + 1}(X)") for i in range(length)]
    cl.append(("negated_conjecture", f"~p{length}(a)"))
    return _cnf(f"chain{length}", cl)


def transitivity_chain(length: int) -> str:
    cl = [("axiom", "~r(X,Y)|~r(Y,Z)|r(X,Z)")]
    cl += [("axiom", f"r(n{i},n{i + 1})") for i in range(length)]
    cl.append(("negated_conjecture", f"~r(n0,n{length})"))
    return _cnf(f"trans{length}", cl)


def parity(n: int) -> str:
    """Even/odd over successor terms: refute that s^n(0) has the wrong parity."""
    term = "z"
    for _ in range(n):
        term = f"s({term})"
    cl = [("axiom", "even(z)"), ("axiom", "~even(X)|odd(s(X))"),
          ("axiom", "~odd(X)|even(s(X))")]
    cl.append(("negated_conjecture", f"~even({term})" if n % 2 == 0 else f"~odd({term})"))
    return _cnf(f"parity{n}", cl)


def factoring_pair(arity: int) -> str:
    """Needs factoring: p(X..)|p(Y..) against ~p(X..)|~p(Y..)."""
    xs = ",".join(f"X{i}" for i in range(arity))
    ys = ",".join(f"Y{i}" for i in range(arity))
    return _cnf(f"fac{arity}", [("axiom", f"p({xs})|p({ys})"),
                                ("negated_conjecture", f"~p({xs})|~p({ys})")])


def function_chain(depth: int) -> str:
    """p(a) with p(X) -> p(f(X)) against ~p(f^depth(a))."""
    term = "a"
    for _ in range(depth):
        term = f"f({term})"
    return _cnf(f"fchain{depth}", [("axiom", "p(a)"), ("axiom", "~p(X)|p(f(X))"),
                                   ("negated_conjecture", f"~p({term})")])


def random_ground_unsat(seed: int, atoms: int = 6, width: int = 3) -> str:
    """Random ground CNF, extended with clauses until it is unsatisfiable."""
    from .check import truth_table_unsat

    rng = random.Random(seed)
    lines: list = []
    while True:
        chosen = rng.sample(range(atoms), min(width, atoms))
        lits = [("" if rng.random() < 0.5 else "~") + f"v{a}" for a in chosen]
        lines.append(("axiom", "|".join(lits)))
        if len(lines) >= atoms:
            prob = parse_problem(_cnf("r", lines))
            if truth_table_unsat(prob.clauses):
                return _cnf(f"rand{seed}", lines)


def soundness_corpus() -> dict:
    """Name -> TPTP text for the bundled unsatisfiable corpus."""
    out = {}
    for n in (2, 3, 4):
        out[f"php{n}"] = pigeonhole(n)
    for k in (1, 2, 4, 6, 8):
        out[f"chain{k}"] = implication_chain(k)
    for k in (1, 2, 3, 4):
        out[f"trans{k}"] = transitivity_chain(k)
    for n in (0, 1, 2, 3, 4, 5):
        out[f"parity{n}"] = parity(n)
    for a in (1, 2, 3):
        out[f"fac{a}"] = factoring_pair(a)
    for d in (1, 3, 5):
        out[f"fchain{d}"] = function_chain(d)
    for seed in range(8):
        out[f"rand{seed}"] = random_ground_unsat(seed, atoms=5 + seed % 4)
    return out


# --------------------------------------------------------------------------
# synthetic guidance family

def family_problem(index: int, rng: random.Random, distractors: int = 30,
                   min_chain: int = 3, max_chain: int = 6) -> str:
    """One refutation core plus ``distractors`` dead-end axioms.

    The core is a chain of argument-swapping rules over ``q0..qL`` shared by
    every problem of the family; only its two Skolem constants are
    problem-specific.  The distractors are Horn clauses over
    problem-specific unary predicates; they are satisfiable, never interact
    with the core, and are smaller than the core rules, so a size-driven
    prover saturates them first.
    """
    length = rng.randint(min_chain, max_chain)
    a, b = f"sk{index}a", f"sk{index}b"
    core = [("axiom", f"q0({a},{b})")]
    core += [("axiom", f"~q{j}(X,Y)|q{j + 1}(Y,X)") for j in range(length)]
    first, second = (a, b) if length % 2 == 0 else (b, a)
    core.append(("negated_conjecture", f"~q{length}({first},{second})"))

    preds = [f"d{index}p{j}" for j in range(8)]
    consts = [f"d{index}e{m}" for m in range(5)]
    n_facts = distractors // 3
    extra: list = []
    for _ in range(n_facts):
        extra.append(("axiom", f"{rng.choice(preds)}({rng.choice(consts)})"))
    for _ in range(distractors - n_facts):
        p, q = rng.sample(preds, 2)
        extra.append(("axiom", f"~{p}(X)|{q}(X)"))
    clauses = extra + core
    rng.shuffle(clauses)
    return _cnf(f"fam{index:02d}", clauses)


def guidance_family(n: int = 40, distractors: int = 30, seed: int = 0) -> dict:
    rng = random.Random(seed)
    return {f"fam{i:02d}": family_problem(i, rng, distractors) for i in range(n)}


def write_corpus(corpus: dict, directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in corpus.items():
        path = directory / f"{name}.p"
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths


def load_problem(path) -> Problem:
    path = Path(path)
    return parse_problem(path.read_text(encoding="utf-8"), name=path.stem)
