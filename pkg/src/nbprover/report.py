"""Comparison of two runs and cumulative-solve curves."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class CompareReport:
    solved_a: int
    solved_b: int
    lost: list      # solved by A, not by B
    gained: list    # solved by B, not by A

    def lines(self) -> list:
        return [f"solved_a={self.solved_a}", f"solved_b={self.solved_b}",
                f"lost={len(self.lost)}", f"gained={len(self.gained)}",
                *(f"lost {p}" for p in self.lost), *(f"gained {p}" for p in self.gained)]


class ProblemSetMismatch(ValueError):
    pass


def compare(a, b) -> CompareReport:
    """Compare baseline run ``a`` with run ``b`` (both :class:`RunResult`)."""
    sa, sb = a.by_problem(), b.by_problem()
    if set(sa) != set(sb):
        only = sorted(set(sa) ^ set(sb))
        raise ProblemSetMismatch(f"problems present in only one run: {', '.join(only)}")
    solved_a = {p for p, r in sa.items() if r.solved}
    solved_b = {p for p, r in sb.items() if r.solved}
    return CompareReport(len(solved_a), len(solved_b), sorted(solved_a - solved_b),
                         sorted(solved_b - solved_a))


def cumulative_solves(result) -> list:
    """``(time_ms, problems solved within time_ms)`` at each distinct solve time."""
    times = sorted(r.time_ms for r in result.records if r.solved)
    out: list = []
    for i, t in enumerate(times, 1):
        if out and out[-1][0] == t:
            out[-1] = (t, i)
        else:
            out.append((t, i))
    return out


def format_plotdata(named_results: list) -> str:
    """gnuplot blocks, one per ``(name, RunResult)``, separated by two blank lines."""
    blocks = []
    for name, result in named_results:
        rows = [f"# {name}", "# time_ms solved"]
        rows += [f"{t} {n}" for t, n in cumulative_solves(result)]
        blocks.append("\n".join(rows))
    return ("\n\n\n".join(blocks) + "\n") if blocks else ""
