"""Command-line front end.

    nbprover prove FILE [--proof] [--save-training PATH] [--classifier PATH]
    nbprover run DIR --out results.csv
    nbprover learn-offline DIR --out OUTDIR
    nbprover learn-online DIR --out OUTDIR
    nbprover build-classifier TDATUM... --out classifier.nb
    nbprover tune --mode {inversion-score,solved-count} ...
    nbprover compare BASELINE.csv GUIDED.csv
    nbprover plotdata RESULTS.csv...
    nbprover generate {soundness,family} OUTDIR

``prove`` exits 0 on refutation, 1 when saturated, 2 on a resource limit and
3 on errors.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .bayes import GuidanceParams, format_params, load_classifier, parse_params, save_classifier
from .check import check_proof
from .clauses import ParseError, PostprocMode
from .learn import RunConfig, read_results, run_corpus, run_offline, run_online, write_results
from .report import ProblemSetMismatch, compare, format_plotdata
from .saturate import FeatureMode, Guidance, ProverConfig, Status, given_clause_loop
from .training import (
    TrainingFormatError, build_classifier, classifier_from_data, load_training, save_training,
)
from .tune import DEFAULT_BOUNDS, TUNED, PSOConfig, tune

EXIT_ERROR = 3
PROBLEM_SUFFIXES = {".p", ".cnf", ".tptp"}
CLASSIFIER_NAME = "classifier.nb"

log = logging.getLogger("nbprover")


class CLIError(Exception):
    pass


def _prover_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--timeout", type=float, default=None, help="seconds per problem")
    p.add_argument("--max-given", type=int, default=None, help="given-clause limit")
    p.add_argument("--postproc", choices=[m.value for m in PostprocMode], default="none")
    p.add_argument("--features", choices=["empty", "axioms", "processed-symbols"],
                   default="empty")
    p.add_argument("--params", default=None, help="c=..,cp=..,cn=..,gamma=..")
    p.add_argument("--w-size", type=float, default=1.0)
    p.add_argument("--w-age", type=float, default=0.0)
    p.add_argument("--skolem-prefix", default="sk")


def _prover_config(args) -> ProverConfig:
    max_given = args.max_given
    if max_given is None and args.timeout is None:
        max_given = 10_000
    return ProverConfig(timeout=args.timeout, max_given=max_given, w_size=args.w_size,
                        w_age=args.w_age, feature_mode=FeatureMode(args.features),
                        postproc_mode=PostprocMode(args.postproc),
                        skolem_prefix=args.skolem_prefix)


def _load_guidance(args):
    """Classifier and params from ``--classifier``/``--params`` (or None)."""
    params = None
    classifier = None
    if getattr(args, "classifier", None):
        try:
            classifier, params = load_classifier(args.classifier)
        except OSError as e:
            raise CLIError(f"cannot read classifier: {e}") from e
    if args.params:
        params = parse_params(args.params, params)
    return classifier, params or GuidanceParams()


def _corpus(directory) -> list:
    d = Path(directory)
    if not d.is_dir():
        raise CLIError(f"{d} is not a directory")
    return sorted((p for p in d.iterdir() if p.is_file() and p.suffix in PROBLEM_SUFFIXES),
                  key=lambda p: p.name)


def _run_config(args, **extra) -> RunConfig:
    _, params = _load_guidance(args)
    return RunConfig(_corpus(args.corpus), _prover_config(args),
                     postproc_mode=args.postproc, feature_mode=args.features,
                     params=params, jobs=args.jobs, **extra)


# --------------------------------------------------------------------------
# commands

def cmd_prove(args) -> int:
    classifier, params = _load_guidance(args)
    config = _prover_config(args)
    if classifier is not None:
        config.guidance = Guidance(classifier, params)
    problem = corpus_mod.load_problem(args.problem)
    result = given_clause_loop(problem, config)
    out = sys.stdout
    if args.proof:
        for line in result.record.proof_lines():
            print(line, file=out)
    print(f"status={result.status.value}", file=out)
    print(f"given={result.stats.given}", file=out)
    print(f"created={result.stats.created}", file=out)
    print(f"wall_time={result.stats.wall_time:.6f}", file=out)
    if args.check and result.status is Status.REFUTED:
        failures = check_proof(result.record, problem)
        print(f"proof_check={'ok' if not failures else 'failed'}", file=out)
        if failures:
            return EXIT_ERROR
    if args.save_training and result.training is not None:
        save_training(args.save_training, result.training)
    return {Status.REFUTED: 0, Status.SATURATED: 1}.get(result.status, 2)


def cmd_run(args) -> int:
    classifier, _ = _load_guidance(args)
    config = _run_config(args)
    result, _ = run_corpus(config, classifier)
    write_results(args.out, result)
    print(f"solved={result.solved}/{len(result.records)}")
    return 0


def cmd_learn_offline(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = _run_config(args, training_dir=out / "training")
    pass1, classifier, pass2 = run_offline(config)
    write_results(out / "pass1.csv", pass1)
    write_results(out / "pass2.csv", pass2)
    save_classifier(out / CLASSIFIER_NAME, classifier, config.params)
    print(f"pass1_solved={pass1.solved} pass2_solved={pass2.solved} labels={len(classifier)}")
    return 0


def cmd_learn_online(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = _run_config(args, training_dir=out / "training")
    result, classifier = run_online(config)
    write_results(out / "results.csv", result)
    save_classifier(out / CLASSIFIER_NAME, classifier, config.params)
    print(f"solved={result.solved} labels={len(classifier)}")
    return 0


def _training_files(items) -> list:
    files = []
    for item in items:
        p = Path(item)
        files += sorted(p.glob("*.tdatum")) if p.is_dir() else [p]
    return files


def cmd_build(args) -> int:
    params = parse_params(args.params) if args.params else GuidanceParams()
    data = build_classifier(_training_files(args.training), args.postproc, args.features,
                            args.skolem_prefix)
    save_classifier(args.out, data, params)
    print(f"labels={len(data)} total={data.total}")
    return 0


def cmd_tune(args) -> int:
    config = _prover_config(args)
    base = parse_params(args.params) if args.params else GuidanceParams()
    pso = PSOConfig(particles=args.particles, iterations=args.iterations,
                    bounds=DEFAULT_BOUNDS, seed=args.seed)
    if args.mode == "inversion-score":
        if not args.training:
            raise CLIError("--training is required for inversion-score tuning")
        data = [d for f in _training_files(args.training) for d in load_training(f)]
        classifier = classifier_from_data(data, args.postproc, args.features,
                                          args.skolem_prefix)
        inputs = {"data": data, "classifier": classifier, "config": config, "base": base}
    else:
        if not args.corpus or not args.classifier:
            raise CLIError("--corpus and --classifier are required for solved-count tuning")
        classifier, file_params = load_classifier(args.classifier)
        if not args.params:
            base = file_params
        inputs = {"problems": _corpus(args.corpus), "classifier": classifier,
                  "config": config, "base": base}
    params, res = tune(args.mode, inputs, pso)
    if args.report:
        with open(args.report, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "best_f", *("cp" if n == "c_p" else "cn" if n == "c_n"
                                                 else n for n in TUNED)])
            for it, f, x in res.trace:
                w.writerow([it, repr(f), *(repr(float(v)) for v in x)])
    print(format_params(params))
    return 0


def cmd_compare(args) -> int:
    report = compare(read_results(args.baseline), read_results(args.other))
    print("\n".join(report.lines()))
    return 0


def cmd_plotdata(args) -> int:
    sys.stdout.write(format_plotdata([(f, read_results(f)) for f in args.results]))
    return 0


def cmd_generate(args) -> int:
    if args.kind == "soundness":
        problems = corpus_mod.soundness_corpus()
    else:
        problems = corpus_mod.guidance_family(args.n, args.distractors, args.seed)
    paths = corpus_mod.write_corpus(problems, args.outdir)
    print(f"wrote {len(paths)} problems to {args.outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nbprover",
                                 description="Resolution prover with learned clause selection")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="prove a single TPTP CNF problem")
    p.add_argument("problem")
    _prover_flags(p)
    p.add_argument("--classifier")
    p.add_argument("--proof", action="store_true", help="print the derivation DAG")
    p.add_argument("--check", action="store_true", help="re-verify the refutation")
    p.add_argument("--save-training", metavar="PATH")
    p.set_defaults(func=cmd_prove)

    for name, func, help_ in [("run", cmd_run, "run a corpus directory"),
                              ("learn-offline", cmd_learn_offline, "two-pass learning"),
                              ("learn-online", cmd_learn_online, "single-pass learning")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("corpus")
        p.add_argument("--out", required=True)
        _prover_flags(p)
        p.add_argument("--jobs", type=int, default=1)
        if name == "run":
            p.add_argument("--classifier")
        p.set_defaults(func=func)

    p = sub.add_parser("build-classifier", help="build a classifier from training files")
    p.add_argument("training", nargs="*", help="tdatum files or directories")
    p.add_argument("--out", required=True)
    p.add_argument("--postproc", choices=[m.value for m in PostprocMode], default="none")
    p.add_argument("--features", choices=["empty", "axioms", "processed-symbols"],
                   default="empty")
    p.add_argument("--params", default=None)
    p.add_argument("--skolem-prefix", default="sk")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("tune", help="tune guidance parameters with PSO")
    p.add_argument("--mode", choices=["inversion-score", "solved-count"],
                   default="inversion-score")
    p.add_argument("--training", nargs="*", help="tdatum files or directories")
    p.add_argument("--corpus")
    p.add_argument("--classifier")
    p.add_argument("--particles", type=int, default=10)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="CSV trace of the global best")
    _prover_flags(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("compare", help="lost/gained between two result files")
    p.add_argument("baseline")
    p.add_argument("other")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plotdata", help="cumulative solves over time")
    p.add_argument("results", nargs="+")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("generate", help="write a generated corpus")
    p.add_argument("kind", choices=["soundness", "family"])
    p.add_argument("outdir")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--distractors", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CLIError, ParseError, TrainingFormatError, ProblemSetMismatch, OSError,
            ValueError) as e:
        print(f"nbprover: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
