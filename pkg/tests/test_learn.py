import dataclasses
import random
import re
import time

from nbprover.bayes import ClassifierData, GuidanceParams
from nbprover.corpus import family_problem, guidance_family, write_corpus
from nbprover.learn import (
    ProblemResult, RunConfig, RunResult, read_results, run_corpus, run_offline, run_online,
    write_results,
)
from nbprover.saturate import ProverConfig, Status, given_clause_loop
from nbprover.training import classifier_from_data
from nbprover.clauses import is_skolem, label_of, parse_problem


def _strip(result):
    return [dataclasses.replace(r, time_ms=0) for r in result.records]


def test_empty_corpus():
    pass1, clf, pass2 = run_offline(RunConfig([]))
    assert pass1.records == [] and pass2.records == [] and len(clf) == 0


def test_pass1_equals_plain_unguided_run(tmp_path):
    paths = write_corpus(guidance_family(6, seed=2), tmp_path)
    cfg = RunConfig(paths, ProverConfig(max_given=300))
    pass1, clf, pass2 = run_offline(cfg)
    plain, _ = run_corpus(cfg)
    assert _strip(pass1) == _strip(plain)
    assert all(r.classifier_labels == 0 for r in pass1.records)
    assert all(r.classifier_labels == len(clf) for r in pass2.records)


def test_nothing_solved_means_unchanged_rerun(tmp_path):
    paths = write_corpus(guidance_family(3, seed=4), tmp_path)
    cfg = RunConfig(paths, ProverConfig(max_given=3))
    pass1, clf, pass2 = run_offline(cfg)
    assert pass1.solved == 0 and len(clf) == 0
    assert [(r.status, r.given) for r in pass1.records] == \
        [(r.status, r.given) for r in pass2.records]


def test_parallel_matches_sequential(tmp_path):
    paths = write_corpus(guidance_family(4, seed=1), tmp_path)
    cfg = RunConfig(paths, ProverConfig(max_given=300))
    seq, _ = run_corpus(cfg)
    par, _ = run_corpus(dataclasses.replace(cfg, jobs=2))
    assert _strip(seq) == _strip(par)


def test_unreadable_problem_is_error_record(tmp_path):
    bad = tmp_path / "bad.p"
    bad.write_text("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(X,Y)).")
    res, data = run_corpus(RunConfig([bad]))
    assert res.records[0].status == "error" and data == []


def _renamed_copy(text):
    # fresh Skolem constants, everything else identical
    return re.sub(r"sk0([ab])", r"sk7\1", text)


def test_online_renamed_copy_ranks_positives_first(tmp_path):
    first = family_problem(0, random.Random(5), distractors=12)
    second = _renamed_copy(first).replace("fam00", "fam01")
    (tmp_path / "a.p").write_text(first)
    (tmp_path / "b.p").write_text(second)
    params = GuidanceParams(c_n=0.01, gamma=10.0)
    cfg = RunConfig([tmp_path / "a.p", tmp_path / "b.p"], ProverConfig(max_given=2000),
                    postproc_mode="consistent-skolem", params=params)
    result, clf = run_online(cfg)
    assert [r.solved for r in result.records] == [True, True]
    assert result.records[0].classifier_labels == 0
    assert result.records[1].given < result.records[0].given

    # instrument the second run directly with the classifier after problem 1
    one, clf1 = run_online(dataclasses.replace(cfg, corpus=cfg.corpus[:1]))
    pc = cfg.prover_config(clf1)
    res = given_clause_loop(parse_problem(second), pc)
    test = is_skolem("sk")
    pos, neg = [], []
    for cid, (score, _) in res.record.scores.items():
        occ = clf1.label_occ.get(label_of(res.record.clauses[cid], "consistent-skolem", test))
        if occ is None:
            continue
        if occ.pos and not occ.neg:
            pos.append(score)
        elif occ.neg and not occ.pos:
            neg.append(score)
    assert pos and neg
    assert min(pos) > max(neg)


def test_online_first_problem_unguided(tmp_path):
    paths = write_corpus(guidance_family(2, seed=3), tmp_path)
    cfg = RunConfig(paths, ProverConfig(max_given=500))
    online, _ = run_online(cfg)
    plain, _ = run_corpus(cfg)
    assert _strip(online)[0] == _strip(plain)[0]


def test_online_training_files(tmp_path):
    paths = write_corpus(guidance_family(2, seed=3), tmp_path / "c")
    cfg = RunConfig(paths, ProverConfig(max_given=500), training_dir=tmp_path / "t")
    result, _ = run_online(cfg)
    assert sorted(p.name for p in (tmp_path / "t").iterdir()) == \
        sorted(f"{r.problem}.tdatum" for r in result.records if r.solved)


def test_results_csv_round_trip(tmp_path):
    res = RunResult([ProblemResult("a", "refuted", 12, 3, 3, 0),
                     ProblemResult("b", "given-limit", 40, 9, 9, 5)])
    write_results(tmp_path / "r.csv", res)
    assert read_results(tmp_path / "r.csv") == res
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == \
        "problem,status,time_ms,given,processed,classifier_labels"


def test_status_values_are_csv_tokens():
    assert {s.value for s in Status} == {"refuted", "saturated", "timeout", "given-limit"}


def test_offline_pass2_with_empty_classifier_equals_pass1(tmp_path):
    paths = write_corpus(guidance_family(4, seed=5), tmp_path)
    for gamma in (0.5, 3.0):
        cfg = RunConfig(paths, ProverConfig(max_given=400),
                        params=GuidanceParams(gamma=gamma, default_rank=0.0))
        plain, _ = run_corpus(cfg)
        empty, _ = run_corpus(cfg, ClassifierData())
        assert _strip(plain) == _strip(empty)


def test_offline_cpu_bound(tmp_path):
    paths = write_corpus(guidance_family(10, seed=6), tmp_path)
    cfg = RunConfig(paths, ProverConfig(max_given=400), postproc_mode="consistent-skolem")
    t = time.process_time()
    _, data = run_corpus(cfg)
    single = time.process_time() - t
    t = time.process_time()
    classifier_from_data(data, cfg.postproc_mode)
    build = time.process_time() - t
    t = time.process_time()
    run_offline(cfg)
    offline = time.process_time() - t
    # small absolute slack absorbs timer granularity
    assert offline <= 2 * single + build + 0.05
