"""General (non-monotone) submodular cover via threshold buckets, plus the
pluggable maximization subroutines used after each pass."""

from __future__ import annotations

import bisect
import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from .monotone import derive_seed
from .oracles import TOL, InputError
from .results import Status, finish_run

MONOTONE_TOL = 1e-9


@dataclass(frozen=True)
class SmpSearch:
    """Outcome of an exact-style subset search."""

    solution: tuple
    value: float
    timed_out: bool = False


@dataclass(frozen=True)
class SmpSubroutine:
    """Maximization routine run over the stored elements after each pass.

    ``stop_fraction`` scales the acceptance level: a pass succeeds when the
    subroutine's output reaches stop_fraction * (1 - eps) * tau.
    """

    kind: str
    stop_fraction: float
    timeout_ms: float = None


_SUBROUTINE_KINDS = {
    "ex": ("exact", 1.0),
    "exact": ("exact", 1.0),
    "fex": ("fast-exact", 1.0),
    "fast-exact": ("fast-exact", 1.0),
    "dg": ("double-greedy", 0.5),
    "double-greedy": ("double-greedy", 0.5),
    "rg": ("random-greedy", 1.0 / math.e),
    "random-greedy": ("random-greedy", 1.0 / math.e),
}


def smp_subroutine(kind, timeout_ms=None):
    """Build a subroutine descriptor from a short or long kind name."""
    try:
        name, fraction = _SUBROUTINE_KINDS[kind.lower()]
    except KeyError:
        raise InputError(f"unknown SMP subroutine kind {kind!r}") from None
    return SmpSubroutine(kind=name, stop_fraction=fraction, timeout_ms=timeout_ms)


def classify_monotone_elements(oracle, T):
    """Split T into elements whose last-in marginal gain is >= 0 and the rest."""
    members = sorted(oracle._check_members(T))
    if not members:
        return (), ()
    state = oracle.state(members)
    mono, nonmono = [], []
    for x in members:
        # gain of x on top of T - {x} equals minus the removal gain
        if state.removal_gain(x) <= MONOTONE_TOL:
            mono.append(x)
        else:
            nonmono.append(x)
    return tuple(mono), tuple(nonmono)


def _branch_search(oracle, base_state, candidates, budget, target, deadline, best_set, best_val):
    """Depth-first search over subsets of candidates (size <= budget) on top
    of base_state.

    Candidate lists hold (-cached_gain, id) entries in decreasing cached
    gain; cached gains from ancestor states stay valid upper bounds by
    submodularity and are refreshed lazily, just before an element is
    branched on.  Branches whose bound cannot beat the incumbent or reach
    the target are pruned.  Returns (best_set, best_val, timed_out, hit).
    """
    if budget <= 0 or not candidates:
        return best_set, best_val, False, None
    seeded = sorted((-base_state.gain(c), c) for c in candidates)
    frames = [[base_state, seeded, 0, budget]]
    while frames:
        if deadline is not None and time.perf_counter() > deadline:
            return best_set, best_val, True, None
        frame = frames[-1]
        state, ordered, pos, remaining = frame
        if pos >= len(ordered) or remaining == 0:
            frames.pop()
            continue
        upper = state.value
        slots = remaining
        idx = pos
        while idx < len(ordered) and slots:
            neg = ordered[idx][0]
            if neg >= 0:
                break
            upper -= neg
            slots -= 1
            idx += 1
        if upper <= best_val + 1e-12 and (target is None or upper < target - TOL):
            frames.pop()
            continue
        neg, chosen = ordered[pos]
        fresh = state.gain(chosen)
        if fresh < -neg - 1e-12:
            # stale entry: refresh and keep the tail in decreasing-gain order
            del ordered[pos]
            bisect.insort(ordered, (-fresh, chosen), lo=pos)
            continue
        frame[2] = pos + 1
        child = state.copy()
        child.add(chosen, fresh)
        if child.value > best_val + 1e-12:
            best_set, best_val = tuple(sorted(child.members)), child.value
        if target is not None and child.value >= target - TOL:
            return best_set, best_val, False, tuple(sorted(child.members))
        if remaining > 1 and pos + 1 < len(ordered):
            frames.append([child, ordered[pos + 1:], 0, remaining - 1])
    return best_set, best_val, False, None


def exact_max_search(oracle, ground, kappa, target=None, timeout_ms=None):
    """Greedy first, then exhaustive branch-and-bound over subsets <= kappa.

    With a target: returns the first set reaching it (greedy prefix when
    possible), else the best set found.  Without a target the search runs to
    completion and the result is the exact maximum.
    """
    ground = tuple(sorted(oracle._check_members(ground)))
    kappa = max(0, min(int(kappa), len(ground)))
    deadline = None if timeout_ms is None else time.perf_counter() + timeout_ms / 1000.0
    root = oracle.state(())
    best_set, best_val = (), root.value
    if target is not None and best_val >= target - TOL:
        return SmpSearch(best_set, best_val)
    if kappa == 0:
        return SmpSearch(best_set, best_val)
    # greedy phase with lazily re-evaluated gains (stale gains are upper bounds)
    greedy = root.copy()
    heap = [(-greedy.gain(c), c) for c in ground]
    heapq.heapify(heap)
    while len(greedy.members) < kappa and heap:
        if deadline is not None and time.perf_counter() > deadline:
            return SmpSearch(best_set, best_val, True)
        _, x = heapq.heappop(heap)
        fresh = greedy.gain(x)
        if heap and (-fresh, x) > heap[0]:
            heapq.heappush(heap, (-fresh, x))
            continue
        if fresh <= TOL:
            break
        greedy.add(x, fresh)
        if greedy.value > best_val + 1e-12:
            best_set, best_val = tuple(sorted(greedy.members)), greedy.value
        if target is not None and greedy.value >= target - TOL:
            return SmpSearch(tuple(sorted(greedy.members)), greedy.value)
    best_set, best_val, timed_out, hit = _branch_search(
        oracle, root, list(ground), kappa, target, deadline, best_set, best_val
    )
    if hit is not None:
        return SmpSearch(hit, best_val)
    return SmpSearch(best_set, best_val, timed_out)


def fast_exact_max_search(oracle, ground, kappa, target=None, timeout_ms=None):
    """Exact search that first pins every monotone element of ground.

    Only applicable in the unconstrained case (kappa >= |ground|); falls back
    to the plain exact search otherwise.
    """
    ground = tuple(sorted(oracle._check_members(ground)))
    if kappa < len(ground):
        return exact_max_search(oracle, ground, kappa, target=target, timeout_ms=timeout_ms)
    deadline = None if timeout_ms is None else time.perf_counter() + timeout_ms / 1000.0
    mono, nonmono = classify_monotone_elements(oracle, ground)
    base = oracle.state(mono)
    best_set, best_val = tuple(sorted(base.members)), base.value
    if target is not None and best_val >= target - TOL:
        return SmpSearch(best_set, best_val)
    best_set, best_val, timed_out, hit = _branch_search(
        oracle, base, list(nonmono), len(nonmono), target, deadline, best_set, best_val
    )
    if hit is not None:
        return SmpSearch(hit, best_val)
    return SmpSearch(best_set, best_val, timed_out)


def random_greedy_max(oracle, kappa, seed, ground=None, target=None):
    """Randomized greedy for non-monotone maximization (1/e in expectation).

    Each of the kappa rounds ranks the remaining elements by marginal gain,
    pads the top-kappa pool with zero-gain dummies, and adds a uniformly
    random pool entry (a dummy pick adds nothing).  An optional target value
    stops the run early once reached.
    """
    if kappa < 1:
        raise InputError(f"budget must be at least 1, got {kappa}")
    pool = tuple(sorted(oracle._check_members(ground))) if ground is not None else tuple(range(oracle.n))
    rng = np.random.default_rng(seed)
    state = oracle.state(())
    for _ in range(kappa):
        if target is not None and state.value >= target - TOL:
            break
        scored = []
        for x in pool:
            if x in state.members:
                continue
            scored.append((state.gain(x), x))
        scored.sort(key=lambda t: (-t[0], t[1]))
        slots = []
        for gain, x in scored:
            if len(slots) == kappa or gain < -1e-12:
                break
            slots.append((gain, x))
        pick = int(rng.integers(kappa))
        if pick < len(slots):
            gain, x = slots[pick]
            state.add(x, gain)
    return tuple(sorted(state.members))


def double_greedy_max(oracle, seed, ground=None):
    """Randomized double greedy for unconstrained maximization (1/2 in expectation)."""
    pool = tuple(sorted(oracle._check_members(ground))) if ground is not None else tuple(range(oracle.n))
    rng = np.random.default_rng(seed)
    grow = oracle.state(())
    shrink = oracle.state(pool)
    for u in pool:
        a = grow.gain(u)
        b = shrink.removal_gain(u)
        a_pos, b_pos = max(a, 0.0), max(b, 0.0)
        if a_pos + b_pos <= 1e-12:
            shrink.remove(u, b)
            continue
        if rng.random() < a_pos / (a_pos + b_pos):
            grow.add(u, a)
        else:
            shrink.remove(u, b)
    return tuple(sorted(grow.members))


def _run_subroutine(oracle, ground, budget, sub, accept_level, seed):
    if sub.kind == "exact":
        found = exact_max_search(oracle, ground, budget, target=accept_level, timeout_ms=sub.timeout_ms)
        return found.solution, found.timed_out
    if sub.kind == "fast-exact":
        found = fast_exact_max_search(oracle, ground, budget, target=accept_level, timeout_ms=sub.timeout_ms)
        return found.solution, found.timed_out
    if not ground:
        return (), False
    if sub.kind == "double-greedy":
        return double_greedy_max(oracle, seed, ground=ground), False
    if sub.kind == "random-greedy":
        return random_greedy_max(oracle, budget, seed, ground=ground, target=accept_level), False
    raise InputError(f"unknown SMP subroutine kind {sub.kind!r}")


def stream_cover(instance, eps, alpha, sub, seed=0, retain_buckets=False,
                 shuffle=False, initial_guess=None, watch=None, trace=None):
    """Bucketed threshold passes for general submodular cover.

    Per pass with guess g, elements are scanned in order and stored in the
    first of ceil(2/eps) buckets where the marginal gain is at least
    eps * tau / (2 g) and the bucket is below its cap ceil(2 g / eps).  After
    the pass a maximization subroutine runs over the stored elements with
    budget equal to the cap; its output is accepted once it reaches
    sub.stop_fraction * (1 - eps) * tau.  Buckets are reset between guesses
    unless ``retain_buckets`` asks for the carry-over behaviour.
    """
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    if alpha <= 0:
        raise InputError(f"alpha must be positive, got {alpha}")
    if not instance.oracle.nonnegative:
        raise InputError("stream cover requires a non-negative oracle")
    oracle = instance.oracle
    tau = instance.tau
    t0, q0 = time.perf_counter(), oracle.query_count
    accept_level = sub.stop_fraction * (1.0 - eps) * tau
    if oracle.eval(()) >= accept_level - TOL:
        return finish_run(oracle, (), Status.SOLVED, accept_level, q0, t0)
    n = oracle.n
    num_buckets = math.ceil(2.0 / eps)
    order = list(range(n))
    if shuffle:
        order = [int(x) for x in np.random.default_rng(derive_seed(seed, 0)).permutation(n)]
    g = min(float(n), max(1.0, float(initial_guess if initial_guess is not None else 1.0 + alpha)))
    buckets = None
    stored = set()
    best_members, best_value = (), 0.0
    pass_index = 0
    while True:
        cap = math.ceil(2.0 * g / eps)
        threshold = eps * tau / (2.0 * g)
        if buckets is None or not retain_buckets:
            buckets = [oracle.state(()) for _ in range(num_buckets)]
            stored = set()
        for u in order:
            if u in stored:
                continue
            for bucket in buckets:
                if len(bucket.members) >= cap:
                    continue
                gain = bucket.gain(u)
                if gain >= threshold - TOL:
                    bucket.add(u, gain)
                    stored.add(u)
                    break
            if watch is not None:
                watch("element", {
                    "g": g,
                    "cap": cap,
                    "element": u,
                    "buckets": [frozenset(b.members) for b in buckets],
                })
        ground = sorted(stored)
        sub_seed = derive_seed(seed, 1, pass_index)
        solution, timed_out = _run_subroutine(oracle, ground, cap, sub, accept_level, sub_seed)
        value = oracle.eval(solution)
        if value > best_value + 1e-12:
            best_members, best_value = solution, value
        if trace is not None:
            trace.write(f"g={g:.6g} stored={len(ground)} smp_value={value:.6g}\n")
        if watch is not None:
            watch("pass", {
                "g": g,
                "cap": cap,
                "stored": tuple(ground),
                "smp_value": value,
                "buckets": [frozenset(b.members) for b in buckets],
            })
        if timed_out:
            return finish_run(oracle, best_members, Status.BUDGET_EXHAUSTED, accept_level, q0, t0)
        if value >= accept_level - TOL:
            return finish_run(oracle, solution, Status.SOLVED, accept_level, q0, t0)
        if g >= n:
            return finish_run(oracle, best_members, Status.INFEASIBLE, accept_level, q0, t0)
        g = min(float(n), (1.0 + alpha) * g)
        pass_index += 1
