"""On-line and off-line learning over a problem corpus.

Off-line: run every problem unguided, build one classifier from all proofs,
then rerun every problem guided by it.  On-line: a single pass in corpus
order, extending the classifier after each proof before the next problem.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .bayes import ClassifierData, GuidanceParams
from .clauses import ParseError, PostprocMode
from .corpus import load_problem
from .saturate import FeatureMode, Guidance, ProverConfig, given_clause_loop
from .training import classifier_from_data, postprocess, save_training, to_examples

log = logging.getLogger(__name__)

RESULT_FIELDS = ["problem", "status", "time_ms", "given", "processed", "classifier_labels"]


@dataclass
class ProblemResult:
    problem: str
    status: str
    time_ms: int = 0
    given: int = 0
    processed: int = 0
    classifier_labels: int = 0

    @property
    def solved(self) -> bool:
        return self.status == "refuted"


@dataclass
class RunResult:
    records: list = field(default_factory=list)

    @property
    def solved(self) -> int:
        return sum(r.solved for r in self.records)

    def by_problem(self) -> dict:
        return {r.problem: r for r in self.records}


@dataclass
class RunConfig:
    corpus: list
    prover: ProverConfig = field(default_factory=ProverConfig)
    postproc_mode: PostprocMode = PostprocMode.NONE
    feature_mode: FeatureMode = FeatureMode.EMPTY
    params: GuidanceParams = field(default_factory=GuidanceParams)
    results_path: Path | None = None
    classifier_path: Path | None = None
    training_dir: Path | None = None
    jobs: int = 1

    def __post_init__(self):
        self.postproc_mode = PostprocMode(self.postproc_mode)
        self.feature_mode = FeatureMode(self.feature_mode)
        self.corpus = [Path(p) for p in self.corpus]

    def prover_config(self, classifier: ClassifierData | None) -> ProverConfig:
        guidance = None if classifier is None else Guidance(classifier, self.params)
        return dataclasses.replace(self.prover, guidance=guidance,
                                   feature_mode=self.feature_mode,
                                   postproc_mode=self.postproc_mode)


def run_problem(path, config: ProverConfig) -> tuple:
    """Prove one problem file; returns ``(ProblemResult, TrainingDatum | None)``.

    Failures to read or parse the problem become an ``error`` record.
    """
    path = Path(path)
    labels = len(config.guidance.classifier) if config.guidance else 0
    start = time.perf_counter()
    try:
        problem = load_problem(path)
        result = given_clause_loop(problem, config)
    except (OSError, ParseError, RecursionError) as e:
        log.warning("%s: %s", path, e)
        return ProblemResult(path.stem, "error", classifier_labels=labels), None
    ms = int(round((time.perf_counter() - start) * 1000))
    rec = ProblemResult(path.stem, result.status.value, ms, result.stats.given,
                        len(result.record.processed), labels)
    return rec, result.training


def _run_one(args):
    return run_problem(*args)


def run_corpus(config: RunConfig, classifier: ClassifierData | None = None) -> tuple:
    """Run every corpus problem with a fixed classifier (or none).

    Returns the run result and the training data of every refutation, both
    in corpus order regardless of ``config.jobs``.
    """
    pc = config.prover_config(classifier)
    tasks = [(p, pc) for p in config.corpus]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks))
    else:
        outcomes = [_run_one(t) for t in tasks]
    result = RunResult([rec for rec, _ in outcomes])
    data = [d for _, d in outcomes if d is not None]
    if config.training_dir is not None:
        Path(config.training_dir).mkdir(parents=True, exist_ok=True)
        for d in data:
            save_training(Path(config.training_dir) / f"{d.problem_name}.tdatum", d)
    return result, data


def run_offline(config: RunConfig) -> tuple:
    """Returns ``(pass1, classifier, pass2)``."""
    pass1, data = run_corpus(config)
    classifier = classifier_from_data(data, config.postproc_mode, config.feature_mode,
                                      config.prover.skolem_prefix)
    pass2, _ = run_corpus(dataclasses.replace(config, training_dir=None), classifier)
    return pass1, classifier, pass2


def run_online(config: RunConfig) -> tuple:
    """Sequential pass; returns ``(RunResult, final classifier)``."""
    classifier = ClassifierData()
    result = RunResult()
    for path in config.corpus:
        rec, datum = run_problem(path, config.prover_config(classifier))
        result.records.append(rec)
        if datum is None:
            continue
        if config.training_dir is not None:
            Path(config.training_dir).mkdir(parents=True, exist_ok=True)
            save_training(Path(config.training_dir) / f"{datum.problem_name}.tdatum", datum)
        d = postprocess(datum, config.postproc_mode, config.prover.skolem_prefix)
        classifier.train_all(to_examples(d, config.feature_mode, config.postproc_mode,
                                         config.prover.skolem_prefix))
    return result, classifier


# --------------------------------------------------------------------------
# results files

def write_results(path, result: RunResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        for r in result.records:
            w.writerow([getattr(r, f) for f in RESULT_FIELDS])


def read_results(path) -> RunResult:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULT_FIELDS:
            raise ValueError(f"{os.fspath(path)}: unexpected header {reader.fieldnames}")
        records = []
        for row in reader:
            records.append(ProblemResult(row["problem"], row["status"], int(row["time_ms"]),
                                         int(row["given"]), int(row["processed"]),
                                         int(row["classifier_labels"])))
    return RunResult(records)
