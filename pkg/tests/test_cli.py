import csv
import random
from pathlib import Path

import pytest

from nbprover.cli import main
from nbprover.corpus import guidance_family, soundness_corpus, write_corpus
from nbprover.learn import ProblemResult, RunResult, write_results
from nbprover.report import ProblemSetMismatch, compare, cumulative_solves, format_plotdata

DATA_DIR = Path(__file__).parent / "data" / "soundness"


@pytest.fixture
def problems(tmp_path):
    (tmp_path / "unsat.p").write_text("cnf(a, axiom, p(a)).\ncnf(b, negated_conjecture, ~p(a)).")
    (tmp_path / "sat.p").write_text("cnf(a, axiom, p(a)).\ncnf(b, axiom, q(b)).")
    return tmp_path


def test_prove_exit_codes(problems, capsys):
    assert main(["prove", str(problems / "unsat.p"), "--check"]) == 0
    out = capsys.readouterr().out
    assert "status=refuted" in out and "proof_check=ok" in out
    assert main(["prove", str(problems / "sat.p")]) == 1


def test_prove_limit_exit_code(tmp_path):
    write_corpus({"php": soundness_corpus()["php4"]}, tmp_path)
    assert main(["prove", str(tmp_path / "php.p"), "--max-given", "3"]) == 2


def test_missing_classifier(problems, capsys):
    code = main(["prove", str(problems / "unsat.p"), "--classifier", str(problems / "nope")])
    assert code > 2
    assert "classifier" in capsys.readouterr().err


def test_parse_error_exit(tmp_path, capsys):
    (tmp_path / "bad.p").write_text("cnf(a, axiom, p(X) | ).")
    assert main(["prove", str(tmp_path / "bad.p")]) == 3
    assert capsys.readouterr().err


def test_run_empty_directory(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["run", str(tmp_path / "empty"), "--out", str(tmp_path / "r.csv")]) == 0
    assert (tmp_path / "r.csv").read_text() == \
        "problem,status,time_ms,given,processed,classifier_labels\n"


def _rows_without_time(path):
    with open(path, newline="") as fh:
        return [{k: v for k, v in r.items() if k != "time_ms"} for r in csv.DictReader(fh)]


def test_learn_offline_outputs_and_reproducibility(tmp_path):
    corpus = tmp_path / "corpus"
    write_corpus(guidance_family(6, seed=1), corpus)
    for out in ("o1", "o2"):
        assert main(["learn-offline", str(corpus), "--out", str(tmp_path / out),
                     "--max-given", "400", "--postproc", "consistent-skolem"]) == 0
    for name in ("pass1.csv", "pass2.csv"):
        assert _rows_without_time(tmp_path / "o1" / name) == \
            _rows_without_time(tmp_path / "o2" / name)
    assert (tmp_path / "o1" / "classifier.nb").read_bytes() == \
        (tmp_path / "o2" / "classifier.nb").read_bytes()
    assert list((tmp_path / "o1" / "training").glob("*.tdatum"))


def test_learn_online_and_build_and_run(tmp_path):
    corpus = tmp_path / "corpus"
    write_corpus(guidance_family(4, seed=2), corpus)
    out = tmp_path / "on"
    assert main(["learn-online", str(corpus), "--out", str(out), "--max-given", "400",
                 "--features", "axioms"]) == 0
    assert (out / "results.csv").exists() and (out / "classifier.nb").exists()
    nb = tmp_path / "built.nb"
    assert main(["build-classifier", str(out / "training"), "--out", str(nb)]) == 0
    assert main(["run", str(corpus), "--out", str(tmp_path / "g.csv"), "--classifier",
                 str(nb), "--max-given", "400", "--params", "gamma=2"]) == 0


def test_tune_command_writes_report(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    write_corpus(guidance_family(2, seed=2), corpus)
    out = tmp_path / "off"
    main(["learn-offline", str(corpus), "--out", str(out), "--max-given", "400"])
    capsys.readouterr()
    report = tmp_path / "trace.csv"
    assert main(["tune", "--training", str(out / "training"), "--particles", "3",
                 "--iterations", "2", "--report", str(report)]) == 0
    assert capsys.readouterr().out.startswith("params ")
    lines = report.read_text().splitlines()
    assert lines[0] == "iteration,best_f,c,cp,cn,gamma" and len(lines) == 3


def _result(solved, unsolved=()):
    recs = [ProblemResult(p, "refuted", 10 * i, 1, 1, 0) for i, p in enumerate(solved, 1)]
    recs += [ProblemResult(p, "timeout", 999, 1, 1, 0) for p in unsolved]
    return RunResult(sorted(recs, key=lambda r: r.problem))


def test_compare_example(tmp_path, capsys):
    a, b = _result(["p1", "p2"], ["p3"]), _result(["p2", "p3"], ["p1"])
    rep = compare(a, b)
    assert rep.lost == ["p1"] and rep.gained == ["p3"]
    same = compare(a, a)
    assert same.lost == [] and same.gained == []
    write_results(tmp_path / "a.csv", a)
    write_results(tmp_path / "b.csv", b)
    assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 0
    assert "lost p1" in capsys.readouterr().out


def test_compare_arithmetic_and_antisymmetry():
    rng = random.Random(0)
    names = [f"p{i}" for i in range(15)]
    for _ in range(200):
        sa = [n for n in names if rng.random() < 0.5]
        sb = [n for n in names if rng.random() < 0.5]
        a = _result(sa, [n for n in names if n not in sa])
        b = _result(sb, [n for n in names if n not in sb])
        rep = compare(a, b)
        assert rep.solved_b == rep.solved_a - len(rep.lost) + len(rep.gained)
        back = compare(b, a)
        assert back.lost == rep.gained and back.gained == rep.lost


def test_compare_mismatch():
    with pytest.raises(ProblemSetMismatch):
        compare(_result(["a"]), _result(["b"]))


def test_cumulative_solves():
    single = RunResult([ProblemResult("a", "refuted", 100)])
    assert cumulative_solves(single) == [(100, 1)]
    res = RunResult([ProblemResult("a", "refuted", 30), ProblemResult("b", "timeout", 5),
                     ProblemResult("c", "refuted", 10), ProblemResult("d", "refuted", 30)])
    rows = cumulative_solves(res)
    assert rows == [(10, 1), (30, 3)]
    assert all(x[1] <= y[1] and x[0] < y[0] for x, y in zip(rows, rows[1:]))


def test_plotdata(tmp_path, capsys):
    write_results(tmp_path / "a.csv", RunResult([ProblemResult("a", "refuted", 100)]))
    assert main(["plotdata", str(tmp_path / "a.csv")]) == 0
    assert capsys.readouterr().out == f"# {tmp_path / 'a.csv'}\n# time_ms solved\n100 1\n"
    two = format_plotdata([("x", _result(["a"])), ("y", _result([]))])
    assert two == "# x\n# time_ms solved\n10 1\n\n\n# y\n# time_ms solved\n"


def test_generate_matches_bundled_corpus(tmp_path):
    assert main(["generate", "soundness", str(tmp_path)]) == 0
    bundled = sorted(p.name for p in DATA_DIR.glob("*.p"))
    assert sorted(p.name for p in tmp_path.glob("*.p")) == bundled
    for name in bundled:
        assert (tmp_path / name).read_text() == \
            (DATA_DIR / name).read_text()
