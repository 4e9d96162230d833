"""Guard-railed brute-force reference solvers used for test provenance."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .oracles import TOL, InputError


class GuardError(InputError):
    """The instance exceeds the brute-force size guard."""


def _guard_limit(max_n):
    if max_n is not None:
        return int(max_n)
    return int(os.environ.get("SUBCOVER_EXACT_GUARD", 20))


def _check_guard(count, max_n):
    limit = _guard_limit(max_n)
    if count > limit:
        raise GuardError(
            f"brute force over {count} elements exceeds the guard {limit} "
            "(pass max_n or set SUBCOVER_EXACT_GUARD)"
        )


@dataclass(frozen=True)
class ExactResult:
    optimum_set: tuple
    optimum_value: float
    enumerated: int


def exact_min_cover(instance, max_n=None):
    """Smallest set with f >= tau - 1e-9, ties broken lexicographically.

    Enumerates subsets in size-then-lexicographic order; returns None when no
    subset reaches the threshold.
    """
    oracle = instance.oracle
    n = oracle.n
    _check_guard(n, max_n)
    tau = instance.tau
    examined = 0
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            examined += 1
            if oracle.eval(combo) >= tau - TOL:
                return ExactResult(combo, oracle.peek(combo), examined)
    return None


def exact_max_cardinality(oracle, kappa, max_n=None, ground=None):
    """Exact maximum of f over subsets of size <= kappa."""
    if kappa < 0:
        raise InputError(f"budget must be non-negative, got {kappa}")
    pool = tuple(range(oracle.n)) if ground is None else tuple(sorted(oracle._check_members(ground)))
    _check_guard(len(pool), max_n)
    best_set, best_val = (), oracle.eval(())
    examined = 1
    for size in range(1, min(kappa, len(pool)) + 1):
        for combo in itertools.combinations(pool, size):
            examined += 1
            value = oracle.eval(combo)
            if value > best_val + 1e-12:
                best_set, best_val = combo, value
    return ExactResult(best_set, best_val, examined)


def exact_max_regularized(inst, kappa, max_n=None):
    """Exact maximum of g - c over subsets of size <= kappa."""
    if kappa < 0:
        raise InputError(f"budget must be non-negative, got {kappa}")
    oracle = inst.oracle
    n = oracle.n
    _check_guard(n, max_n)
    best_set, best_val = (), oracle.eval(())
    examined = 1
    for size in range(1, min(kappa, n) + 1):
        for combo in itertools.combinations(range(n), size):
            examined += 1
            value = oracle.eval(combo) - inst.cost(combo)
            if value > best_val + 1e-12:
                best_set, best_val = combo, value
    return ExactResult(best_set, best_val, examined)


def exact_min_cover_regularized(inst, max_n=None):
    """Smallest set with g - c >= tau - 1e-9, or None when infeasible."""
    oracle = inst.oracle
    n = oracle.n
    _check_guard(n, max_n)
    tau = inst.tau
    examined = 0
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            examined += 1
            value = oracle.eval(combo) - inst.cost(combo)
            if value >= tau - TOL:
                return ExactResult(combo, value, examined)
    return None
