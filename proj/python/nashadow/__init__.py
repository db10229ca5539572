"""Constructive shadowing for nonautonomous map families.

Thin wrappers over the compiled core: structured results come back as dicts.
"""

import json as _json

from . import _core
from ._core import (
    MapFamily,
    PseudoOrbit,
    ShadowError,
    compose,
    delta_budget,
    diameter_bound,
    evaluate,
    inject_defects,
    periodicize,
    perturb_orbit,
    preimages,
    product,
    uniqueness_certificate,
    upper_density,
)

__all__ = [
    "MapFamily",
    "PseudoOrbit",
    "ShadowError",
    "family",
    "compose",
    "delta_budget",
    "diameter_bound",
    "evaluate",
    "inject_defects",
    "periodicize",
    "perturb_orbit",
    "preimages",
    "product",
    "uniqueness_certificate",
    "upper_density",
    "pullback_shadow",
    "periodic_shadow",
    "cesaro_to_density_zero",
    "density_zero_to_cesaro",
    "limit_shadow_point",
    "average_shadow_point",
    "product_equivalence_check",
    "run_scenario",
]


def family(descriptor):
    """Build a map family from a descriptor dict such as {"kind": "doubling"}."""
    return _core.family(_json.dumps(descriptor))


def pullback_shadow(fam, po, eps):
    return _json.loads(_core.pullback_shadow(fam, po, eps))


def periodic_shadow(fam, po, period, eps):
    return _json.loads(_core.periodic_shadow(fam, po, period, eps))


def cesaro_to_density_zero(a):
    return _json.loads(_core.cesaro_to_density_zero(list(a)))


def density_zero_to_cesaro(a, J, M):
    return _json.loads(_core.density_zero_to_cesaro(list(a), list(J), M))


def limit_shadow_point(fam, po, levels, check_equicontinuity=True):
    return _json.loads(_core.limit_shadow_point(fam, po, levels, check_equicontinuity))


def average_shadow_point(fam, A, po, tolerance=0.05):
    return _json.loads(_core.average_shadow_point(fam, list(A), po, tolerance))


def product_equivalence_check(F, G, variant="h", eps=0.25, delta=0.3, max_length=6):
    return _json.loads(_core.product_equivalence_check(F, G, variant, eps, delta, max_length))


def run_scenario(scenario, seed=None, horizon=None):
    """Run a scenario dict; returns the full report including metadata."""
    return _json.loads(_core.run_scenario(_json.dumps(scenario), seed, horizon))
