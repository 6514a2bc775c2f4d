"""Exact computations with commutative DG algebras over Artin bases."""

import json

from ._dgdef import Algebra, Error, example_ids, suite_names, trial_seed
from ._dgdef import run_example_json as _run_example_json
from ._dgdef import run_suite_json as _run_suite_json

EXIT_CODES = {"verified": 0, "refuted": 2, "inconclusive-truncation": 3}


def run_example(example_id, max_wordlen=None, window=None):
    return json.loads(_run_example_json(example_id, max_wordlen, window))


def run_suite(name, trials, seed):
    return json.loads(_run_suite_json(name, trials, seed))


__all__ = [
    "Algebra",
    "Error",
    "EXIT_CODES",
    "example_ids",
    "run_example",
    "run_suite",
    "suite_names",
    "trial_seed",
]
