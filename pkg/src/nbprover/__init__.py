"""Given-clause resolution prover with Naive Bayes clause-selection guidance
learned from positive and negative examples of previous proofs."""

from .bayes import ClassifierData, ExampleTriple, GuidanceParams, Occurrence, merge
from .clauses import Clause, PostprocMode, Problem, label_of, parse_clause, parse_problem
from .saturate import FeatureMode, Guidance, ProverConfig, Status, given_clause_loop
from .training import TrainingDatum, postprocess, to_examples

__version__ = "0.1.0"
