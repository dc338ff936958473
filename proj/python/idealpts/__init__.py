"""Python front end for the ideal limit points toolkit.

Reports and decisions are returned as plain dicts with the same keys as the CLI's JSON output.
"""

import json

from . import _idealpts
from ._idealpts import ResourceLimit, cantor_dist, demo_names, q_enum

__version__ = _idealpts.__version__

__all__ = [
    "ResourceLimit",
    "cantor_dist",
    "decide",
    "demo_names",
    "exit_code",
    "q_enum",
    "realize",
    "run_demo",
    "scheme_check",
    "scheme_probe",
    "verify_subject",
]


def decide(ideal, set_term):
    """Decide membership of a set term, e.g. decide("z", "(res 1 4)")["verdict"] == "positive"."""
    return json.loads(_idealpts.decide(ideal, set_term))


def run_demo(name, **params):
    """Run a registered demo; keyword overrides: resolution, horizon, range_count, replay_depth, sweep, seed."""
    return json.loads(_idealpts.run_demo(name, params))


def verify_subject(subject, **params):
    """Verify a subject document (a dict in the `verify --subject` format)."""
    return json.loads(_idealpts.verify_subject(json.dumps(subject), params))


def scheme_check(scheme, ideal="", depth=6):
    return json.loads(_idealpts.scheme_check(scheme, ideal, depth))


def scheme_probe(scheme, point, ideal="", sweep=100, seed=7):
    return json.loads(_idealpts.scheme_probe(scheme, point, ideal, sweep, seed))


def realize(subject, count=100, bits=16):
    """First `count` values of the realization described by `subject`, as bit prefixes."""
    return _idealpts.realize_prefixes(json.dumps(subject), count, bits)


def exit_code(report):
    return _idealpts.exit_code(report["verdict"])
