"""Monotone cover solvers: examples, size bounds, query accounting, determinism."""

import math

import numpy as np
import pytest

from subcover import (
    CoverageOracle,
    CoverInstance,
    InputError,
    SmpInstance,
    Status,
    convert_cover,
    convert_cover_randomized,
    convert_rand_repetitions,
    exact_max_cardinality,
    exact_min_cover,
    greedy_cover,
    greedy_max,
    greedy_max_subroutine,
    make_greedy_tightness_instance,
    make_synthetic_summarization,
    stochastic_greedy_cover,
    stochastic_greedy_max,
    stochastic_max_subroutine,
    threshold_greedy_cover,
)

from util import random_coverage


def cover_corpus(seed, count, n_max=14):
    """Random feasible monotone instances with a tau fraction of f(U)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(5, n_max + 1))
        oracle = random_coverage(rng, n)
        total = oracle.peek(range(n))
        if total == 0:
            continue
        tau = float(rng.uniform(0.3, 0.95)) * total
        out.append(CoverInstance(oracle, tau))
    return out


class TestGreedyCover:
    def test_single_dominant_element(self):
        oracle = CoverageOracle([{0, 1}, {1}])
        res = greedy_cover(CoverInstance(oracle, 2.0), 0.1)
        assert res.solution == (0,) and res.f_value == 2.0
        assert res.status == Status.SOLVED

    def test_zero_threshold(self):
        oracle = CoverageOracle([{0}])
        res = greedy_cover(CoverInstance(oracle, 0.0), 0.3)
        assert res.solution == () and res.f_value == 0.0
        assert res.status == Status.SOLVED

    def test_tightness_lower_bound(self):
        inst = make_greedy_tightness_instance(10, 1000)
        res = greedy_cover(CoverInstance(inst.oracle.clone(), inst.tau), 0.05)
        need = math.ceil(math.log(0.05) / math.log(1 - 1 / 10))
        assert res.size >= need
        assert set(res.solution) <= set(inst.slice_ids)

    def test_eps_validation(self):
        oracle = CoverageOracle([{0}])
        with pytest.raises(InputError):
            greedy_cover(CoverInstance(oracle, 1.0), 1.0)

    def test_infeasible_detected(self):
        oracle = CoverageOracle([{0}, {1}])
        res = greedy_cover(CoverInstance(oracle, 10.0), 0.2)
        assert res.status == Status.INFEASIBLE

    def test_monotone_progress_and_size_bound(self):
        for inst in cover_corpus(101, 40):
            opt = exact_min_cover(
                CoverInstance(inst.oracle.clone(), inst.tau)
            )
            for eps in (0.05, 0.2, 0.5):
                res = greedy_cover(inst, eps)
                assert res.status == Status.SOLVED
                assert res.f_value >= (1 - eps) * inst.tau - 1e-9
                assert res.size <= math.ceil(math.log(1 / eps) * len(opt.optimum_set)) + 1
                # replaying the chosen prefix never decreases f
                values = [
                    inst.oracle.peek(res.solution[: i + 1])
                    for i in range(res.size)
                ]
                assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))

    def test_query_budget(self):
        for inst in cover_corpus(102, 10):
            res = greedy_cover(inst, 0.2)
            n = inst.oracle.n
            assert res.queries <= n * (res.size + 1) + 1

    def test_matches_naive_reimplementation(self):
        # replay plain greedy with uncounted evaluations only
        for inst in cover_corpus(104, 15):
            res = greedy_cover(inst, 0.2)
            oracle, chosen = inst.oracle, []
            while oracle.peek(chosen) < 0.8 * inst.tau - 1e-9:
                gains = [
                    (oracle.peek(chosen + [x]) - oracle.peek(chosen), x)
                    for x in range(oracle.n) if x not in chosen
                ]
                best_gain = max(g for g, _ in gains)
                if best_gain <= 1e-9:
                    break
                chosen.append(min(x for g, x in gains if g == best_gain))
            assert res.solution == tuple(sorted(chosen))


class TestThresholdGreedyCover:
    def test_first_pass_pick(self):
        oracle = CoverageOracle([{0, 1, 2}, {0}, {1}])
        res = threshold_greedy_cover(CoverInstance(oracle, 3.0), 0.2)
        assert res.solution == (0,) and res.f_value == 3.0

    def test_zero_threshold(self):
        oracle = CoverageOracle([{0}])
        res = threshold_greedy_cover(CoverInstance(oracle, 0.0), 0.2)
        assert res.solution == ()

    def test_matches_greedy_first_pick(self):
        oracle = CoverageOracle([{0, 1}, {1}])
        res = threshold_greedy_cover(CoverInstance(oracle, 2.0), 0.1)
        assert res.solution == (0,)

    def test_infeasible_floor(self):
        oracle = CoverageOracle([{0}, {1}])
        res = threshold_greedy_cover(CoverInstance(oracle, 10.0), 0.2)
        assert res.status == Status.INFEASIBLE

    def test_size_bound_on_corpus(self):
        for inst in cover_corpus(103, 40):
            opt = exact_min_cover(CoverInstance(inst.oracle.clone(), inst.tau))
            for eps in (0.05, 0.2, 0.5):
                res = threshold_greedy_cover(inst, eps)
                assert res.status == Status.SOLVED
                assert res.f_value >= (1 - eps) * inst.tau - 1e-9
                bound = math.ceil((math.log(2 / eps) + 1) * len(opt.optimum_set)) + 1
                assert res.size <= bound


class TestStochasticGreedyCover:
    def test_single_element_universe(self):
        oracle = CoverageOracle([{0}])
        res = stochastic_greedy_cover(CoverInstance(oracle, 1.0), 0.2, 0.2, 0.5, seed=0)
        assert res.solution == (0,) and res.status == Status.SOLVED

    def test_full_sampling_matches_greedy_trajectory(self):
        # eps large enough that every sample is the whole universe
        rng = np.random.default_rng(200)
        oracle = random_coverage(rng, 8)
        tau = 0.8 * oracle.peek(range(8))
        res = stochastic_greedy_cover(
            CoverInstance(oracle.clone(), tau), eps=0.5, delta=0.5, alpha=0.1,
            seed=3, initial_guess=1.0,
        )
        ref = greedy_cover(CoverInstance(oracle.clone(), tau), 0.5)
        assert res.solution == ref.solution

    def test_deterministic_given_seed(self):
        oracle = make_synthetic_summarization(60, 40, 0.3, 0.02, 10, seed=4)
        tau = 0.6 * oracle.peek(range(40))
        a = stochastic_greedy_cover(CoverInstance(oracle.clone(), tau), 0.2, 0.1, 0.1, seed=7)
        b = stochastic_greedy_cover(CoverInstance(oracle.clone(), tau), 0.2, 0.1, 0.1, seed=7)
        assert a.solution == b.solution and a.queries == b.queries

    def test_infeasible_detected(self):
        oracle = CoverageOracle([{0}, {1}])
        res = stochastic_greedy_cover(CoverInstance(oracle, 10.0), 0.3, 0.3, 0.5, seed=0)
        assert res.status == Status.INFEASIBLE

    def test_query_accounting_per_iteration(self):
        # with a fixed guess, every iteration costs at most one query per
        # sampled element per tracked solution (plus the initial evaluations)
        rng = np.random.default_rng(210)
        oracle = random_coverage(rng, 30, max_tags=30)
        tau = 0.7 * oracle.peek(range(30))
        guess = 5.0
        res = stochastic_greedy_cover(
            CoverInstance(oracle, tau), eps=0.3, delta=0.5, alpha=100.0,
            seed=2, initial_guess=guess,
        )
        sample_size = min(30, math.ceil(30 * math.log(3 / 0.3) / guess))
        iterations = res.size  # one add per iteration for the single solution
        assert res.queries <= 1 + (iterations + 1) * sample_size

    def test_solved_runs_meet_threshold(self):
        rng = np.random.default_rng(201)
        for _ in range(20):
            oracle = random_coverage(rng, 12)
            total = oracle.peek(range(12))
            if total == 0:
                continue
            tau = 0.7 * total
            res = stochastic_greedy_cover(
                CoverInstance(oracle, tau), 0.2, 0.1, 0.1, seed=int(rng.integers(10**6))
            )
            if res.status == Status.SOLVED:
                assert res.f_value >= 0.8 * tau - 1e-9


class TestStochasticGreedyMax:
    def test_single_element(self):
        oracle = CoverageOracle([{0}])
        res = stochastic_greedy_max(SmpInstance(oracle, 1), 0.2, seed=0)
        assert res.solution == (0,)

    def test_full_budget_covers_universe(self):
        rng = np.random.default_rng(202)
        oracle = random_coverage(rng, 6)
        res = stochastic_greedy_max(SmpInstance(oracle.clone(), 6), 0.2, seed=1)
        assert res.f_value == oracle.peek(range(6))

    def test_size_within_ceiling(self):
        rng = np.random.default_rng(203)
        oracle = random_coverage(rng, 12)
        kappa = 3
        res = stochastic_greedy_max(SmpInstance(oracle, kappa), 0.2, seed=5)
        assert res.size <= math.ceil(math.log(3 / 0.4)) * kappa

    def test_expected_value_near_optimum(self):
        rng = np.random.default_rng(204)
        oracle = random_coverage(rng, 12)
        kappa = 3
        opt = exact_max_cardinality(oracle.clone(), kappa).optimum_value
        values = [
            stochastic_greedy_max(SmpInstance(oracle.clone(), kappa), 0.2, seed=s).f_value
            for s in range(120)
        ]
        assert sum(values) / len(values) >= 0.8 * opt * 0.97


class TestConvertCover:
    def test_budget_sweep_with_greedy(self):
        rng = np.random.default_rng(205)
        oracle = random_coverage(rng, 10)
        tau = 0.9 * oracle.peek(range(10))
        res = convert_cover(greedy_max_subroutine, CoverInstance(oracle, tau), alpha=1.0, gamma=0.8)
        assert res.status == Status.SOLVED
        assert res.f_value >= 0.8 * tau - 1e-9

    def test_zero_threshold_short_circuits(self):
        oracle = CoverageOracle([{0}])
        res = convert_cover(greedy_max_subroutine, CoverInstance(oracle, 0.0), 1.0, 0.9)
        assert res.solution == () and res.queries <= 1

    def test_infeasible(self):
        oracle = CoverageOracle([{0}])
        res = convert_cover(greedy_max_subroutine, CoverInstance(oracle, 5.0), 1.0, 0.9)
        assert res.status == Status.INFEASIBLE

    def test_costlier_than_direct_stochastic_on_tightness(self):
        inst = make_greedy_tightness_instance(10, 1000)
        tau = inst.tau
        conv = convert_cover(
            stochastic_max_subroutine(0.2),
            CoverInstance(inst.oracle.clone(), tau), alpha=0.1, gamma=0.8, seed=2,
        )
        direct = stochastic_greedy_cover(
            CoverInstance(inst.oracle.clone(), tau), 0.2, 0.1, 0.1, seed=2
        )
        assert conv.status == Status.SOLVED and direct.status == Status.SOLVED
        assert conv.queries > direct.queries


class TestConvertCoverRandomized:
    def test_half_delta_is_single_repetition(self):
        assert convert_rand_repetitions(0.5) == 1
        assert convert_rand_repetitions(0.1) == 4

    def test_deterministic_subroutine_matches_convert(self):
        rng = np.random.default_rng(206)
        oracle = random_coverage(rng, 9)
        tau = 0.8 * oracle.peek(range(9))
        eps = 0.2
        res_r = convert_cover_randomized(
            greedy_max_subroutine, CoverInstance(oracle.clone(), tau),
            alpha=0.5, delta=0.5, eps=eps, seed=0,
        )
        res_d = convert_cover(
            greedy_max_subroutine, CoverInstance(oracle.clone(), tau),
            alpha=0.5, gamma=1 - eps,
        )
        assert res_r.solution == res_d.solution

    def test_monte_carlo_success_rate(self):
        rng = np.random.default_rng(207)
        oracle = random_coverage(rng, 20, max_tags=24)
        tau = 0.75 * oracle.peek(range(20))
        opt = exact_min_cover(CoverInstance(oracle.clone(), tau))
        eps, delta, alpha = 0.2, 0.1, 0.1
        hits = 0
        trials = 100
        for seed in range(trials):
            res = convert_cover_randomized(
                stochastic_max_subroutine(eps / 2), CoverInstance(oracle.clone(), tau),
                alpha=alpha, delta=delta, eps=eps, seed=seed,
            )
            if res.status == Status.SOLVED and res.f_value >= (1 - eps) * tau - 1e-9:
                hits += 1
        assert hits >= 0.9 * trials
        assert opt is not None  # instance genuinely solvable


class TestGreedyMax:
    def test_respects_budget(self):
        rng = np.random.default_rng(208)
        oracle = random_coverage(rng, 10)
        assert len(greedy_max(oracle, 3)) <= 3

    def test_matches_exact_on_modular(self):
        oracle = CoverageOracle([{0}, {1, 2}, {3}])
        assert greedy_max(oracle, 1) == (1,)


class TestFeasibilityOnSuccess:
    def test_every_solved_result_reaches_target(self):
        for inst in cover_corpus(209, 25):
            for runner in (
                lambda i: greedy_cover(i, 0.2),
                lambda i: threshold_greedy_cover(i, 0.2),
                lambda i: stochastic_greedy_cover(i, 0.2, 0.2, 0.2, seed=13),
            ):
                res = runner(inst)
                if res.status == Status.SOLVED:
                    fresh = inst.oracle.peek(res.solution)
                    assert fresh == pytest.approx(res.f_value)
                    assert fresh >= 0.8 * inst.tau - 1e-9
