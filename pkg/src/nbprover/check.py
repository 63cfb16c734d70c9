"""Independent verification of refutations.

Deliberately shares no inference code with :mod:`nbprover.saturate`: it has
its own recursive unifier and compares clauses as literal sets up to a
bijective variable renaming.
"""

from __future__ import annotations

import itertools

from .clauses import App, Clause, Literal, Var


def _subst(t, s):
    if isinstance(t, Var):
        return _subst(s[t], s) if t in s else t
    return App(t.symbol, tuple(_subst(a, s) for a in t.args))


def _occurs_in(v, t) -> bool:
    if isinstance(t, Var):
        return v == t
    return any(_occurs_in(v, a) for a in t.args)


def _mgu(a, b, s):
    """Recursive Robinson unification extending ``s``; None on failure."""
    a, b = _subst(a, s), _subst(b, s)
    if isinstance(a, Var) or isinstance(b, Var):
        if a == b:
            return s
        v, t = (a, b) if isinstance(a, Var) else (b, a)
        if _occurs_in(v, t):
            return None
        out = {k: _subst(x, {v: t}) for k, x in s.items()}
        out[v] = t
        return out
    if a.symbol != b.symbol or len(a.args) != len(b.args):
        return None
    for x, y in zip(a.args, b.args):
        s = _mgu(x, y, s)
        if s is None:
            return None
    return s


def _tag(lits, tag: str) -> list:
    def go(t):
        if isinstance(t, Var):
            return Var(t.name + tag)
        return App(t.symbol, tuple(go(a) for a in t.args))
    return [Literal(l.positive, go(l.atom)) for l in lits]


def _apply(lits, s) -> frozenset:
    return frozenset(Literal(l.positive, _subst(l.atom, s)) for l in lits)


def _match(pattern, target, m: dict, inv: dict):
    """Extend the variable bijection ``m`` (with inverse ``inv``) so that
    ``pattern`` maps onto ``target``; returns the new pair or None."""
    if isinstance(pattern, Var):
        if not isinstance(target, Var):
            return None
        if pattern in m:
            return (m, inv) if m[pattern] == target else None
        if target in inv:
            return None
        return {**m, pattern: target}, {**inv, target: pattern}
    if isinstance(target, Var) or pattern.symbol != target.symbol \
            or len(pattern.args) != len(target.args):
        return None
    for x, y in zip(pattern.args, target.args):
        res = _match(x, y, m, inv)
        if res is None:
            return None
        m, inv = res
    return m, inv


def is_variant(a, b) -> bool:
    """True iff literal sets ``a`` and ``b`` are equal up to variable renaming."""
    a, b = list(set(a)), list(set(b))
    if len(a) != len(b):
        return False

    def search(i, m, inv, used):
        if i == len(a):
            return True
        la = a[i]
        for j, lb in enumerate(b):
            if j in used or la.positive != lb.positive:
                continue
            res = _match(la.atom, lb.atom, m, inv)
            if res is not None and search(i + 1, *res, used | {j}):
                return True
        return False

    return search(0, {}, {}, frozenset())


def candidate_resolvents(p1: Clause, p2: Clause) -> list:
    l1, l2 = _tag(p1.literals, "'1"), _tag(p2.literals, "'2")
    out = []
    for i, a in enumerate(l1):
        for j, b in enumerate(l2):
            if a.positive == b.positive:
                continue
            s = _mgu(a.atom, b.atom, {})
            if s is not None:
                out.append(_apply(l1[:i] + l1[i + 1:] + l2[:j] + l2[j + 1:], s))
    return out


def candidate_factors(p: Clause) -> list:
    out = []
    for a, b in itertools.combinations(p.literals, 2):
        if a.positive != b.positive:
            continue
        s = _mgu(a.atom, b.atom, {})
        if s is not None:
            out.append(_apply(p.literals, s))
    return out


def check_step(c: Clause, parents: list) -> bool:
    if c.rule == "res" and len(parents) == 2:
        cands = candidate_resolvents(*parents)
    elif c.rule == "fac" and len(parents) == 1:
        cands = candidate_factors(parents[0])
    else:
        return False
    return any(is_variant(c.literals, k) for k in cands)


def check_record(record, problem=None, ids=None) -> list:
    """Re-verify every derived clause of a proof record (or only ``ids``).

    Returns a list of ``(clause id, reason)`` failures; empty means sound.
    Initial clauses are checked against ``problem`` when given.
    """
    failures = []
    initial = set(problem.clauses) if problem is not None else None
    for cid, c in record.clauses.items():
        if ids is not None and cid not in ids:
            continue
        if c.origin != "derived":
            if initial is not None and c not in initial:
                failures.append((cid, "initial clause not in problem"))
            continue
        if any(p >= cid or p not in record.clauses for p in c.parents):
            failures.append((cid, "parent does not precede clause"))
            continue
        if not check_step(c, [record.clauses[p] for p in c.parents]):
            failures.append((cid, f"{c.rule} step does not check"))
    if record.refutation is not None and not record.clauses[record.refutation].is_empty:
        failures.append((record.refutation, "refuting clause is not empty"))
    return failures


def check_proof(record, problem=None) -> list:
    """Like :func:`check_record` but only for ancestors of the empty clause."""
    if record.refutation is None:
        return [(None, "no refutation")]
    return check_record(record, problem, record.ancestors(record.refutation))


# --------------------------------------------------------------------------
# ground truth tables

def ground_atoms(clauses) -> list:
    atoms: dict = {}
    for c in clauses:
        for l in c.literals:
            if any(True for _ in _vars(l.atom)):
                raise ValueError(f"clause {c} is not ground")
            atoms.setdefault(l.atom, None)
    return list(atoms)


def _vars(t):
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from _vars(a)


def is_ground(clauses) -> bool:
    return all(not any(True for _ in _vars(l.atom)) for c in clauses for l in c.literals)


def truth_table_unsat(clauses, max_atoms: int = 12) -> bool:
    """Brute-force: True iff no assignment to the ground atoms satisfies all clauses."""
    atoms = ground_atoms(clauses)
    if len(atoms) > max_atoms:
        raise ValueError(f"{len(atoms)} atoms exceed the truth-table limit {max_atoms}")
    index = {a: i for i, a in enumerate(atoms)}
    encoded = [[(index[l.atom], l.positive) for l in c.literals] for c in clauses]
    for bits in range(1 << len(atoms)):
        if all(any(((bits >> i) & 1) == pos for i, pos in c) for c in encoded):
            return False
    return True
