import random

import pytest
from hypothesis import given, strategies as st

from nbprover.clauses import (
    App, Clause, Literal, ParseError, PostprocMode, Var, contains_skolem, is_skolem,
    label_of, normalize_all, normalize_skolem, parse_clause, parse_problem,
    problem_to_tptp, serialize_clause,
)


def test_parse_two_literal_clause():
    p = parse_problem("cnf(a1, axiom, p(X) | ~q(X)).")
    assert len(p.clauses) == 1
    c = p.clauses[0]
    assert len(c.literals) == 2
    assert c.literals[0] == Literal(True, App("p", (Var("X"),)))
    assert c.literals[1] == Literal(False, App("q", (Var("X"),)))
    assert c.origin == "axiom" and c.name == "a1"


def test_parse_negated_conjecture_role():
    c = parse_problem("cnf(g, negated_conjecture, ~p(c)).").clauses[0]
    assert c.origin == "negated_conjecture"


def test_hypothesis_role_is_axiom():
    assert parse_problem("cnf(h, hypothesis, p).").clauses[0].origin == "axiom"


@pytest.mark.parametrize("text", [
    "cnf(a, axiom, p(X)).\ncnf(b, axiom, p(X,Y)).",
    "cnf(a, axiom, p(f(X))).\ncnf(b, axiom, q(f)).",
    "cnf(a, conjecture, p).",
    "cnf(a, axiom, p(X) | ).",
    "cnf(a, axiom, p(X)",
    "include('Axioms/SET001.ax').",
    "cnf(a, axiom, p(X)). junk",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_problem(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as e:
        parse_problem("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(X,Y)).")
    assert e.value.line == 2


def test_comments_and_ids_in_file_order():
    p = parse_problem("% header\ncnf(a, axiom, p).  % trailing\ncnf(b, axiom, ~p).\n")
    assert [c.id for c in p.clauses] == [0, 1]
    assert [c.age for c in p.clauses] == [0, 1]


def test_serialize_stored_order():
    c = Clause((Literal(False, App("q", (Var("X"),))), Literal(True, App("p", (Var("X"),)))))
    assert serialize_clause(c) == "~q(X)|p(X)"


def test_serialize_empty_clause():
    assert serialize_clause(Clause(())) == "$false"
    assert parse_clause("$false").is_empty


def _random_term(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Var(rng.choice(["X", "Y", "Z1"]))
        return App(rng.choice(["a", "b", "sk1"]))
    sym, ar = rng.choice([("f", 1), ("g", 2)])
    return App(sym, tuple(_random_term(rng, depth - 1) for _ in range(ar)))


def _random_clause(rng):
    lits = []
    for _ in range(rng.randint(0, 4)):
        pred, ar = rng.choice([("p", 1), ("q", 2), ("r", 0)])
        lits.append(Literal(rng.random() < 0.5,
                            App(pred, tuple(_random_term(rng, 2) for _ in range(ar)))))
    return Clause(tuple(lits))


def test_round_trip_random_clauses():
    rng = random.Random(11)
    for _ in range(100):
        c = _random_clause(rng)
        assert parse_clause(serialize_clause(c)).literals == c.literals


@given(st.integers(0, 10_000))
def test_problem_round_trip(seed):
    rng = random.Random(seed)
    text = "\n".join(f"cnf(c{i}, axiom, {serialize_clause(_random_clause(rng))})."
                     for i in range(3))
    p = parse_problem(text)
    again = parse_problem(problem_to_tptp(p))
    assert [c.literals for c in again.clauses] == [c.literals for c in p.clauses]


def test_is_skolem_examples():
    sk = is_skolem("sk")
    assert contains_skolem(parse_clause("p(sk1)"), sk)
    assert not contains_skolem(parse_clause("p(a)"), sk)
    assert not contains_skolem(parse_clause("p(X)"), sk)


def test_consistent_skolem_example():
    c = parse_clause("p(skx, sky, skx)")
    assert serialize_clause(normalize_skolem(c)) == "p(c1,c2,c1)"


def test_consistent_skolem_no_skolems_unchanged():
    c = parse_clause("p(a, X) | ~q(b)")
    assert normalize_skolem(c).literals == c.literals


def test_consistent_skolem_first_occurrence():
    c = parse_clause("q(sky, skx)")
    assert serialize_clause(normalize_skolem(c)) == "q(c1,c2)"


def test_consistent_normal_example():
    assert serialize_clause(normalize_all(parse_clause("p(x, y, x)"))) == "c1(c2,c3,c2)"


def test_consistent_normal_commutativity_pair():
    plus = parse_clause("equal(plus(a,b), plus(b,a))")
    times = parse_clause("equal(times(a,b), times(b,a))")
    assert serialize_clause(normalize_all(plus)) == serialize_clause(normalize_all(times))
    assert label_of(plus, "consistent-normal") == label_of(times, "consistent-normal")
    assert label_of(plus, "none") != label_of(times, "none")


def test_consistent_normal_conflates_distinct_predicates():
    assert normalize_all(parse_clause("p(X)")).literals == \
        normalize_all(parse_clause("q(Z)")).literals


def test_labels_deterministic_and_variant_invariant():
    c = parse_clause("p(X) | q(X)")
    for mode in PostprocMode:
        assert label_of(c, mode) == label_of(parse_clause("p(X) | q(X)"), mode)
    assert label_of(c, "consistent-normal") == label_of(parse_clause("p(Y) | q(Y)"),
                                                       "consistent-normal")
    assert label_of(c, "none") != label_of(parse_clause("p(a) | q(X)"), "none")


def test_normalisation_ignores_literal_order():
    a = parse_clause("~p(sk1) | q(sk2)")
    b = parse_clause("q(sk2) | ~p(sk1)")
    assert label_of(a, "consistent-skolem") == label_of(b, "consistent-skolem")
