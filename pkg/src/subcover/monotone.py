"""Solvers for monotone submodular cover and the maximization routines they reuse."""

from __future__ import annotations

import math
import time

import numpy as np

from .oracles import TOL, InputError, truncate
from .results import Status, finish_run


def derive_seed(seed, *key):
    """Deterministic child seed for stream (seed, key...)."""
    return int(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key)).generate_state(1)[0])


def _check_unit_interval(name, value):
    if not 0.0 < value < 1.0:
        raise InputError(f"{name} must lie in (0, 1), got {value}")


def _check_positive(name, value):
    if value <= 0:
        raise InputError(f"{name} must be positive, got {value}")


def _require_monotone(oracle):
    if not oracle.monotone:
        raise InputError("this solver requires a monotone oracle")


def _best_gain(state, candidates):
    """Argmax marginal gain over candidates not yet selected; ties -> lowest id."""
    best, best_gain = None, None
    for x in candidates:
        if x in state.members:
            continue
        gain = state.gain(x)
        if best is None or gain > best_gain:
            best, best_gain = x, gain
    return best, best_gain


def greedy_cover(instance, eps):
    """Plain greedy: add the best element until f reaches (1 - eps) * tau."""
    _check_unit_interval("eps", eps)
    _require_monotone(instance.oracle)
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    target = (1.0 - eps) * instance.tau
    if instance.tau <= 0:
        return finish_run(oracle, (), Status.SOLVED, target, q0, t0)
    state = oracle.state(())
    status = Status.SOLVED
    while state.value < target - TOL:
        best, gain = _best_gain(state, range(oracle.n))
        if best is None or gain <= TOL:
            # monotone + submodular: no remaining element can ever help
            status = Status.INFEASIBLE
            break
        state.add(best, gain)
    return finish_run(oracle, state.members, status, target, q0, t0)


def threshold_greedy_cover(instance, eps):
    """Descending-threshold greedy; every pass adds all elements above w.

    w starts at the best singleton value and shrinks by (1 - eps/2) per
    pass.  The run stops as soon as f reaches (1 - eps) * tau, or reports
    InfeasibleDetected once w sinks below eps * max_single / n.
    """
    _check_unit_interval("eps", eps)
    _require_monotone(instance.oracle)
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    target = (1.0 - eps) * instance.tau
    if instance.tau <= 0:
        return finish_run(oracle, (), Status.SOLVED, target, q0, t0)
    state = oracle.state(())
    if state.value >= target - TOL:
        return finish_run(oracle, state.members, Status.SOLVED, target, q0, t0)
    w = max((state.gain(u) for u in range(oracle.n)), default=0.0)
    if w <= TOL:
        return finish_run(oracle, state.members, Status.INFEASIBLE, target, q0, t0)
    floor = eps * w / oracle.n
    status = None
    while status is None:
        for u in range(oracle.n):
            if u in state.members:
                continue
            gain = state.gain(u)
            if gain >= w - TOL:
                state.add(u, gain)
                if state.value >= target - TOL:
                    status = Status.SOLVED
                    break
        else:
            w *= 1.0 - eps / 2.0
            if w < floor:
                status = Status.INFEASIBLE
    return finish_run(oracle, state.members, status, target, q0, t0)


def stochastic_greedy_cover(instance, eps, delta, alpha, seed, initial_guess=None):
    """Sampled greedy cover with a growing guess of the optimum size.

    Keeps ceil(ln(1/delta)/ln 2) candidate solutions.  Each iteration extends
    every solution with the best element of a fresh uniform sample of size
    min(n, ceil(n * ln(3/eps) / g)); after iteration r > ln(3/eps) * g the
    guess g grows by (1 + alpha), capped at n.  Gains are taken against the
    truncated objective min(f, tau).  Stops once some solution reaches
    (1 - eps) * tau and returns the smallest one.
    """
    _check_unit_interval("eps", eps)
    _check_unit_interval("delta", delta)
    _check_positive("alpha", alpha)
    _require_monotone(instance.oracle)
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    tau = instance.tau
    target = (1.0 - eps) * tau
    if tau <= 0:
        return finish_run(oracle, (), Status.SOLVED, target, q0, t0)
    n = oracle.n
    capped = truncate(oracle, tau)  # shares the query counter
    num_solutions = max(1, math.ceil(math.log(1.0 / delta) / math.log(2.0)))
    states = [capped.state(()) for _ in range(num_solutions)]
    rngs = [np.random.default_rng(derive_seed(seed, i)) for i in range(num_solutions)]
    lead = math.log(3.0 / eps)
    g = min(float(n), max(1.0, float(initial_guess if initial_guess is not None else 1.0 + alpha)))
    r = 1
    stalled = 0
    stall_limit = math.ceil(lead * n)
    status = Status.SOLVED
    while not any(st.value >= target - TOL for st in states):
        if g >= n and stalled >= stall_limit:
            status = Status.INFEASIBLE
            break
        sample_size = min(n, math.ceil(n * lead / g))
        for st, rng in zip(states, rngs):
            sample = np.sort(rng.choice(n, size=sample_size, replace=False))
            best, gain = _best_gain(st, (int(x) for x in sample))
            if best is not None:
                st.add(best, gain)
        r += 1
        if r > lead * g:
            g = min(float(n), (1.0 + alpha) * g)
        if g >= n:
            stalled += 1
    winners = [st for st in states if st.value >= target - TOL]
    if winners:
        chosen = min(winners, key=lambda st: len(st.members)).members
    else:
        chosen = min(states, key=lambda st: len(st.members)).members
    return finish_run(oracle, chosen, status, target, q0, t0)


def _stochastic_max_run(oracle, kappa, eps, rng, ground):
    """Core sampled-greedy maximization; returns the chosen element set."""
    pool = np.asarray(ground, dtype=np.int64)
    n = oracle.n
    steps = math.ceil(math.log(3.0 / (2.0 * eps)) * kappa)
    sample_size = min(len(pool), math.ceil((n / kappa) * math.log(3.0 / (2.0 * eps))))
    state = oracle.state(())
    for _ in range(steps):
        sample = np.sort(rng.choice(pool, size=sample_size, replace=False))
        best, gain = _best_gain(state, (int(x) for x in sample))
        if best is not None:
            state.add(best, gain)
    return tuple(sorted(state.members))


def stochastic_greedy_max(instance, eps, seed):
    """Over-budget sampled greedy maximization (expected value near optimal).

    Runs ceil(ln(3/(2 eps)) * kappa) steps, each adding the best element of a
    uniform sample of size ceil((n / kappa) * ln(3/(2 eps))).
    """
    _check_unit_interval("eps", eps)
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    rng = np.random.default_rng(seed)
    chosen = _stochastic_max_run(oracle, instance.kappa, eps, rng, instance.ground_ids())
    return finish_run(oracle, chosen, Status.SOLVED, 0.0, q0, t0)


def stochastic_max_subroutine(eps):
    """Adapter: sampled-greedy maximization as a (oracle, kappa, seed) callable."""

    def run(oracle, kappa, seed, ground=None):
        rng = np.random.default_rng(seed)
        pool = tuple(range(oracle.n)) if ground is None else tuple(ground)
        return _stochastic_max_run(oracle, kappa, eps, rng, pool)

    return run


def greedy_max(oracle, kappa, ground=None):
    """Budgeted greedy maximization; stops early when no positive gain remains."""
    if kappa < 0:
        raise InputError(f"budget must be non-negative, got {kappa}")
    pool = tuple(range(oracle.n)) if ground is None else tuple(sorted(ground))
    limit = math.ceil(kappa - 1e-12)
    state = oracle.state(())
    while len(state.members) < limit:
        best, gain = _best_gain(state, pool)
        if best is None or gain <= TOL:
            break
        state.add(best, gain)
    return tuple(sorted(state.members))


def greedy_max_subroutine(oracle, kappa, seed=None, ground=None):
    """Deterministic greedy maximization in the (oracle, kappa, seed) shape."""
    return greedy_max(oracle, kappa, ground=ground)


def _budget_schedule(n, alpha, initial):
    """Geometric budget guesses (real-valued, capped at n); every guess is a
    separate subroutine run even when consecutive guesses are close."""
    budgets = []
    g = max(1.0, float(initial))
    while True:
        budget = min(float(n), g)
        budgets.append(budget)
        if budget >= n:
            return budgets
        g *= 1.0 + alpha


def convert_cover(smp_alg, instance, alpha, gamma, seed=0, initial_budget=None):
    """Solve cover by sweeping budgets through a maximization routine.

    Reruns smp_alg with budgets (1 + alpha)^r (deduplicated integers, capped
    at n) until f of its output reaches gamma * tau.
    """
    _check_positive("alpha", alpha)
    if not 0.0 < gamma <= 1.0:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    target = gamma * instance.tau
    if oracle.eval(()) >= target - TOL:
        return finish_run(oracle, (), Status.SOLVED, target, q0, t0)
    chosen = ()
    start = initial_budget if initial_budget is not None else 1.0 + alpha
    for index, budget in enumerate(_budget_schedule(oracle.n, alpha, start)):
        chosen = tuple(smp_alg(oracle, budget, derive_seed(seed, index)))
        if oracle.eval(chosen) >= target - TOL:
            return finish_run(oracle, chosen, Status.SOLVED, target, q0, t0)
    return finish_run(oracle, chosen, Status.INFEASIBLE, target, q0, t0)


def convert_rand_repetitions(delta):
    """How many runs per budget guess the randomized conversion performs."""
    _check_unit_interval("delta", delta)
    return max(1, math.ceil(math.log(1.0 / delta) / math.log(2.0)))


def convert_cover_randomized(smp_alg, instance, alpha, delta, eps, seed=0, initial_budget=None):
    """Randomized conversion: repeat the maximization per guess until one hits.

    Each budget guess g runs smp_alg ceil(ln(1/delta)/ln 2) times on the
    truncated objective min(f, tau); stops when any repetition reaches
    (1 - eps) * tau and returns the smallest successful solution.
    """
    _check_positive("alpha", alpha)
    _check_unit_interval("eps", eps)
    oracle = instance.oracle
    t0, q0 = time.perf_counter(), oracle.query_count
    tau = instance.tau
    target = (1.0 - eps) * tau
    if tau <= 0:
        return finish_run(oracle, (), Status.SOLVED, target, q0, t0)
    reps = convert_rand_repetitions(delta)
    capped = truncate(oracle, tau)
    best = ()
    start = initial_budget if initial_budget is not None else 1.0 + alpha
    for index, budget in enumerate(_budget_schedule(oracle.n, alpha, start)):
        winners = []
        for i in range(reps):
            candidate = tuple(smp_alg(capped, budget, derive_seed(seed, index, i)))
            if capped.eval(candidate) >= target - TOL:
                winners.append(candidate)
        if winners:
            chosen = min(winners, key=len)
            return finish_run(oracle, chosen, Status.SOLVED, target, q0, t0)
        best = candidate
    return finish_run(oracle, best, Status.INFEASIBLE, target, q0, t0)
