"""Free-termination analysis of finite semiautomata with queries.

Thin wrappers around the _freeterm extension: dicts and lists go in, dicts
and lists come out, with JSON text crossing the boundary. Model dicts use
the same schema as the CLI's model files.
"""

import json as _json

from . import _freeterm
from ._freeterm import CapExceeded, InputError, check_prop_names

__all__ = [
    "CapExceeded",
    "InputError",
    "analyze",
    "canonical_text",
    "check_cf",
    "check_prop",
    "check_prop_names",
    "gen_fig1",
    "gen_g_counter",
    "gen_pn_counter",
    "gen_powerset",
    "gen_tc",
    "gen_two_phase",
    "minimize",
    "simulate",
    "to_dot",
]


def gen_fig1(variant):
    """One of the four reference DFAs over {a,b,c}: variant "a".."d"."""
    return _json.loads(_freeterm.gen_fig1(variant))


def gen_powerset(atoms, contains):
    """Union-driven powerset machine asking whether `contains` is present."""
    return _json.loads(_freeterm.gen_powerset(list(atoms), contains))


def gen_two_phase(atoms):
    """Two-phase set over the atoms; the query is the visible set."""
    return _json.loads(_freeterm.gen_two_phase(list(atoms)))


def gen_g_counter(replicas, cap, with_merge=True):
    """Grow-only counter with a raw-sum query."""
    return _json.loads(_freeterm.gen_g_counter(replicas, cap, with_merge))


def gen_pn_counter(replicas, cap):
    """Increment/decrement counter with a signed-sum query."""
    return _json.loads(_freeterm.gen_pn_counter(replicas, cap))


def gen_tc(edges, source, target, cycle_query=False):
    """Naive transitive-closure round chain with a path or cycle query."""
    return _json.loads(_freeterm.gen_tc([tuple(e) for e in edges], source, target, cycle_query))


def canonical_text(model):
    """Canonical serialization of a model dict, as written by the CLI."""
    return _freeterm.canonical(_json.dumps(model))


def analyze(model, with_algebra=True, commutativity_bound=3):
    """FT verdicts, behavior category and algebra flags for a model dict."""
    return _json.loads(_freeterm.analyze(_json.dumps(model), with_algebra, commutativity_bound))


def minimize(model, collapse_only=False):
    """Query-preserving minimization: {"model", "old_to_new", "warnings"}."""
    return _json.loads(_freeterm.minimize(_json.dumps(model), collapse_only))


def check_prop(model, prop):
    """One named property check: {"prop", "status", "detail", "states"}."""
    return _json.loads(_freeterm.check_prop(_json.dumps(model), prop))


def to_dot(model, shade_ft=True):
    """Graphviz text for a model dict."""
    return _freeterm.to_dot(_json.dumps(model), shade_ft)


def check_cf(network, query, instance, universe=None, trials=25, seed=0):
    """Seeded runs checked against the FT prediction.

    `network` is {"nodes": n, "edges": [[u, v], ...]}, `instance` and
    `universe` are lists of {"rel": ..., "tuple": [...]} facts; `universe`
    defaults to the instance's own facts.
    """
    return _json.loads(
        _freeterm.check_cf(
            _json.dumps(network),
            query,
            _json.dumps(instance),
            "" if universe is None else _json.dumps(universe),
            trials,
            seed,
        )
    )


def simulate(network, query, instance, universe=None, seed=0, all_metadata=False):
    """One seeded run; returns the trace dict."""
    return _json.loads(
        _freeterm.simulate(
            _json.dumps(network),
            query,
            _json.dumps(instance),
            "" if universe is None else _json.dumps(universe),
            seed,
            all_metadata,
        )
    )
