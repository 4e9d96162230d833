"""Regularized cover: distorted greedy maximization, a cover conversion for
it, and a single-pass streaming variant."""

from __future__ import annotations

import math
import time

from .oracles import TOL, InputError
from .results import BicriteriaResult, Status


def _check_instance(inst, need_kappa=False, need_tau=False):
    if not inst.oracle.monotone:
        raise InputError("regularized objectives require a monotone gain oracle")
    if need_kappa and inst.kappa is None:
        raise InputError("instance carries no budget")
    if need_tau and inst.tau is None:
        raise InputError("instance carries no cover threshold")


def distortion_horizon(eps, kappa):
    """Number of distorted steps: ceil(ln(1/eps) * kappa)."""
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(math.log(1.0 / eps) * kappa)


def distorted_potential(inst, eps, i, X):
    """(1 - 1/kappa)^(t - i) * g(X) - c(X) with t the distortion horizon."""
    _check_instance(inst, need_kappa=True)
    kappa = inst.kappa
    t = distortion_horizon(eps, kappa)
    if not 0 <= i <= t:
        raise InputError(f"step index {i} outside [0, {t}]")
    factor = (1.0 - 1.0 / kappa) ** (t - i)
    return factor * inst.oracle.eval(X) - inst.cost(X)


def distorted_greedy_max(inst, eps, watch=None):
    """Greedy on the distorted objective with a positive-gain gate.

    At step i the element maximizing
    (1 - 1/kappa)^(t - i) * dg(S, x) - c_x is added, provided that quantity
    is positive; otherwise the run stops early.  At most t elements are
    chosen.
    """
    _check_instance(inst, need_kappa=True)
    oracle = inst.oracle
    kappa = inst.kappa
    t = distortion_horizon(eps, kappa)
    state = oracle.state(())
    step = 1
    while len(state.members) < t:
        factor = (1.0 - 1.0 / kappa) ** (t - step)
        best, best_score, best_gain = None, None, None
        for x in range(oracle.n):
            if x in state.members:
                continue
            gain = state.gain(x)
            score = factor * gain - inst.costs[x]
            if best is None or score > best_score:
                best, best_score, best_gain = x, score, gain
        if best is None or best_score <= TOL:
            break
        state.add(best, best_gain)
        if watch is not None:
            watch(step, best, best_score)
        step += 1
    return tuple(sorted(state.members))


def convert_regularized(reg_alg, inst, alpha, gamma, beta):
    """Budget sweep turning a regularized maximizer into a cover routine.

    Runs reg_alg on the cost-scaled objective g - (gamma/beta) * c with
    geometrically growing budgets until g(S) - (gamma/beta) * c(S) reaches
    gamma * tau.  ``f_value`` of the result reports that checked quantity.
    """
    _check_instance(inst, need_tau=True)
    if alpha <= 0:
        raise InputError(f"alpha must be positive, got {alpha}")
    if not 0.0 < gamma <= 1.0 or beta <= 0:
        raise InputError("need gamma in (0, 1] and beta > 0")
    oracle = inst.oracle
    scale = gamma / beta
    target = gamma * inst.tau
    t0, q0 = time.perf_counter(), oracle.query_count

    def assemble(members, status):
        solution = tuple(sorted(members))
        value = oracle.peek(solution) - scale * inst.cost(solution)
        return BicriteriaResult(
            solution=solution,
            f_value=value,
            size=len(solution),
            queries=oracle.query_count - q0,
            status=status,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
            target=target,
        )

    if oracle.eval(()) >= target - TOL:
        return assemble((), Status.SOLVED)
    scaled = inst.with_scaled_costs(scale)
    chosen = ()
    g = 1.0 + alpha
    while True:
        budget = min(float(oracle.n), g)
        chosen = tuple(reg_alg(scaled.with_scaled_costs(1.0, kappa=budget)))
        value = oracle.eval(chosen) - scale * inst.cost(chosen)
        if value >= target - TOL:
            return assemble(chosen, Status.SOLVED)
        if budget >= oracle.n:
            return assemble(chosen, Status.INFEASIBLE)
        g *= 1.0 + alpha


def distorted_cover(inst, eps, alpha):
    """Cover through the distorted maximizer with its natural constants."""
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    gamma = 1.0 - eps
    beta = math.log(1.0 / eps)

    def run(scaled_inst):
        return distorted_greedy_max(scaled_inst, eps)

    return convert_regularized(run, inst, alpha, gamma, beta)


def distorted_stream_cover(inst, eps, beta, opt_size):
    """One ordered pass accepting u when dg(S, u) - beta * c_u clears
    eps * tau / opt_size; stops at ceil(opt_size / eps) elements.

    opt_size is a caller-supplied guess of the optimal cover size;
    experimental, wrap in a geometric guessing loop for end-to-end use.
    """
    _check_instance(inst, need_tau=True)
    if not 0.0 < eps < 1.0:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    if beta < 1.0:
        raise InputError(f"beta must be at least 1, got {beta}")
    if opt_size < 1:
        raise InputError(f"opt_size must be at least 1, got {opt_size}")
    oracle = inst.oracle
    limit = math.ceil(opt_size / eps)
    bar = eps * inst.tau / opt_size
    state = oracle.state(())
    for u in range(oracle.n):
        if len(state.members) >= limit:
            break
        gain = state.gain(u)
        if gain - beta * inst.costs[u] >= bar - TOL:
            state.add(u, gain)
    return tuple(sorted(state.members))
