"""Query-counted set-function oracles, truncation, and instance generators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-9


class InputError(ValueError):
    """An argument violates an operation's precondition."""


class QueryCounter:
    """Mutable query tally, shared between an oracle and its derived views."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def tick(self):
        self.count += 1


class SetFunctionOracle:
    """Value oracle for a set function over the ground set {0, .., n-1}.

    Every evaluation increments the query counter by exactly one.  Marginal
    gains taken through a ``SolutionState`` also cost one query each: the
    value of the current solution prefix is cached, so only the extended set
    has to be (conceptually) evaluated.
    """

    monotone = False
    nonnegative = True

    def __init__(self, n, name="f", counter=None):
        if n < 0:
            raise InputError(f"ground set size must be non-negative, got {n}")
        self.n = int(n)
        self.name = name
        self._counter = counter if counter is not None else QueryCounter()
        self._gain_base = None  # (frozenset, value) cache for marginal_gain

    # subclasses implement the raw set function
    def _value(self, members):
        raise NotImplementedError

    def _check_element(self, x):
        x = int(x)
        if not 0 <= x < self.n:
            raise InputError(f"element {x} outside ground set of size {self.n}")
        return x

    def _check_members(self, S):
        if isinstance(S, (set, frozenset)):
            return {self._check_element(x) for x in S}
        members = [self._check_element(x) for x in S]
        out = set(members)
        if len(out) != len(members):
            raise InputError("element set contains duplicate ids")
        return out

    @property
    def query_count(self):
        return self._counter.count

    def eval(self, S):
        """Evaluate f(S); counts one query."""
        members = self._check_members(S)
        self._counter.tick()
        return self._value(members)

    def peek(self, S):
        """Evaluate f(S) without counting; for post-hoc verification only."""
        return self._value(self._check_members(S))

    def marginal_gain(self, S, x):
        """f(S + x) - f(S); costs two queries, or one when f(S) was cached."""
        members = self._check_members(S)
        x = self._check_element(x)
        if x in members:
            raise InputError(f"element {x} already in the base set")
        key = frozenset(members)
        if self._gain_base is not None and self._gain_base[0] == key:
            base = self._gain_base[1]
        else:
            self._counter.tick()
            base = self._value(members)
            self._gain_base = (key, base)
        self._counter.tick()
        return self._value(members | {x}) - base

    def state(self, S=()):
        """Incremental solution evaluator rooted at S; costs one query."""
        return self._make_state(self._check_members(S))

    def _make_state(self, members):
        return SolutionState(self, members)

    def clone(self):
        """Structural copy with an independent query counter."""
        raise NotImplementedError


class SolutionState:
    """A solution set with its cached objective value.

    ``gain``/``removal_gain`` cost one query each.  ``add``/``remove`` are
    free when handed the gain just computed against this state; otherwise
    they recompute it (one query).
    """

    def __init__(self, oracle, members):
        self.oracle = oracle
        self.members = set(members)
        oracle._counter.tick()
        self.value = oracle._value(self.members)

    def gain(self, x):
        x = self.oracle._check_element(x)
        if x in self.members:
            raise InputError(f"element {x} already in the solution")
        self.oracle._counter.tick()
        return self._gain(x)

    def removal_gain(self, x):
        x = self.oracle._check_element(x)
        if x not in self.members:
            raise InputError(f"element {x} not in the solution")
        self.oracle._counter.tick()
        return self._removal_gain(x)

    def add(self, x, gain=None):
        if gain is None:
            gain = self.gain(x)
        self._apply_add(int(x))
        self.value += gain
        return gain

    def remove(self, x, gain=None):
        if gain is None:
            gain = self.removal_gain(x)
        self._apply_remove(int(x))
        self.value += gain
        return gain

    def copy(self):
        dup = object.__new__(type(self))
        dup.__dict__.update(self.__dict__)
        self._copy_into(dup)
        return dup

    # default implementations fall back to full evaluation
    def _gain(self, x):
        return self.oracle._value(self.members | {x}) - self.value

    def _removal_gain(self, x):
        return self.oracle._value(self.members - {x}) - self.value

    def _apply_add(self, x):
        self.members.add(x)

    def _apply_remove(self, x):
        self.members.discard(x)

    def _copy_into(self, dup):
        dup.members = set(self.members)


class CoverageOracle(SetFunctionOracle):
    """Tag-coverage objective: f(S) is the number of distinct tags on S.

    Monotone, submodular, f(empty) = 0.  Tags are stored both as frozensets
    and as bitmasks so that evaluations and gains stay cheap.
    """

    monotone = True
    nonnegative = True

    def __init__(self, tag_sets, total_tags=None, name="coverage", counter=None):
        tag_sets = [frozenset(int(t) for t in tags) for tags in tag_sets]
        super().__init__(len(tag_sets), name=name, counter=counter)
        max_tag = -1
        for tags in tag_sets:
            for t in tags:
                if t < 0:
                    raise InputError(f"negative tag id {t}")
                if t > max_tag:
                    max_tag = t
        if total_tags is None:
            total_tags = max_tag + 1
        elif total_tags <= max_tag:
            raise InputError("total_tags smaller than the largest tag id + 1")
        self.tag_sets = tuple(tag_sets)
        self.total_tags = int(total_tags)
        self._masks = tuple(
            sum(1 << t for t in tags) for tags in tag_sets
        )

    def _value(self, members):
        covered = 0
        for x in members:
            covered |= self._masks[x]
        return float(covered.bit_count())

    def _make_state(self, members):
        return _CoverageState(self, members)

    def clone(self):
        dup = CoverageOracle.__new__(CoverageOracle)
        SetFunctionOracle.__init__(dup, self.n, name=self.name)
        dup.tag_sets = self.tag_sets
        dup.total_tags = self.total_tags
        dup._masks = self._masks
        for attr in ("original_ids", "original_tags"):
            if hasattr(self, attr):
                setattr(dup, attr, getattr(self, attr))
        return dup


class _CoverageState(SolutionState):
    def __init__(self, oracle, members):
        self._covered = 0
        self._count = {}
        for x in members:
            for t in oracle.tag_sets[x]:
                self._count[t] = self._count.get(t, 0) + 1
            self._covered |= oracle._masks[x]
        super().__init__(oracle, members)

    def _gain(self, x):
        return float((self.oracle._masks[x] & ~self._covered).bit_count())

    def _removal_gain(self, x):
        lost = 0
        for t in self.oracle.tag_sets[x]:
            if self._count[t] == 1:
                lost += 1
        return -float(lost)

    def _apply_add(self, x):
        self.members.add(x)
        for t in self.oracle.tag_sets[x]:
            self._count[t] = self._count.get(t, 0) + 1
        self._covered |= self.oracle._masks[x]

    def _apply_remove(self, x):
        self.members.discard(x)
        for t in self.oracle.tag_sets[x]:
            left = self._count[t] - 1
            if left:
                self._count[t] = left
            else:
                del self._count[t]
                self._covered &= ~(1 << t)

    def _copy_into(self, dup):
        dup.members = set(self.members)
        dup._count = dict(self._count)


class GraphCutOracle(SetFunctionOracle):
    """Weighted undirected graph cut: f(S) = total weight crossing (S, V-S).

    Submodular, non-monotone, f(empty) = f(V) = 0.  Duplicate edges have
    their weights summed; self-loops contribute nothing.
    """

    monotone = False
    nonnegative = True

    def __init__(self, n, edges, name="cut", counter=None):
        super().__init__(n, name=name, counter=counter)
        adj = [dict() for _ in range(self.n)]
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1.0
            else:
                u, v, w = edge
            u = self._check_element(u)
            v = self._check_element(v)
            w = float(w)
            if w < 0:
                raise InputError(f"negative edge weight {w}")
            if u == v:
                continue
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        self.adjacency = tuple(adj)
        self.weighted_degree = tuple(sum(nbrs.values()) for nbrs in adj)

    def _value(self, members):
        total = 0.0
        internal = 0.0
        for v in members:
            total += self.weighted_degree[v]
            for nbr, w in self.adjacency[v].items():
                if nbr > v and nbr in members:
                    internal += w
        return total - 2.0 * internal

    def _make_state(self, members):
        return _GraphCutState(self, members)

    def edge_count(self):
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def clone(self):
        dup = GraphCutOracle.__new__(GraphCutOracle)
        SetFunctionOracle.__init__(dup, self.n, name=self.name)
        dup.adjacency = self.adjacency
        dup.weighted_degree = self.weighted_degree
        if hasattr(self, "original_ids"):
            dup.original_ids = self.original_ids
        return dup


class _GraphCutState(SolutionState):
    def _to_members(self, x):
        w = 0.0
        for nbr, weight in self.oracle.adjacency[x].items():
            if nbr in self.members:
                w += weight
        return w

    def _gain(self, x):
        return self.oracle.weighted_degree[x] - 2.0 * self._to_members(x)

    def _removal_gain(self, x):
        inside = 0.0
        for nbr, weight in self.oracle.adjacency[x].items():
            if nbr != x and nbr in self.members:
                inside += weight
        return 2.0 * inside - self.oracle.weighted_degree[x]


class TruncatedOracle(SetFunctionOracle):
    """min(f, tau) wrapper; shares the inner oracle's query counter."""

    def __init__(self, inner, tau):
        if tau < 0:
            raise InputError(f"truncation threshold must be non-negative, got {tau}")
        super().__init__(inner.n, name=f"min({inner.name},{tau:g})", counter=inner._counter)
        self.inner = inner
        self.tau = float(tau)
        self.monotone = inner.monotone
        self.nonnegative = inner.nonnegative

    def _value(self, members):
        return min(self.inner._value(members), self.tau)

    def _make_state(self, members):
        return _TruncatedState(self, members)

    def clone(self):
        return TruncatedOracle(self.inner.clone(), self.tau)


class _TruncatedState(SolutionState):
    def __init__(self, oracle, members):
        # the inner state's construction already pays the single query
        self._inner = oracle.inner._make_state(set(members))
        self.oracle = oracle
        self.members = self._inner.members
        self.value = min(self._inner.value, oracle.tau)
        self._pending = {}

    def gain(self, x):
        x = self.oracle._check_element(x)
        if x in self.members:
            raise InputError(f"element {x} already in the solution")
        inner_gain = self._inner._gain(x)
        self.oracle._counter.tick()
        self._pending[("add", x)] = inner_gain
        tau = self.oracle.tau
        return min(self._inner.value + inner_gain, tau) - self.value

    def removal_gain(self, x):
        x = self.oracle._check_element(x)
        if x not in self.members:
            raise InputError(f"element {x} not in the solution")
        inner_gain = self._inner._removal_gain(x)
        self.oracle._counter.tick()
        self._pending[("rem", x)] = inner_gain
        return min(self._inner.value + inner_gain, self.oracle.tau) - self.value

    def add(self, x, gain=None):
        x = int(x)
        inner_gain = self._pending.get(("add", x))
        if inner_gain is None:
            self.gain(x)
            inner_gain = self._pending[("add", x)]
        self._inner.add(x, inner_gain)
        self._pending.clear()
        new_value = min(self._inner.value, self.oracle.tau)
        delta = new_value - self.value
        self.value = new_value
        return delta

    def remove(self, x, gain=None):
        x = int(x)
        inner_gain = self._pending.get(("rem", x))
        if inner_gain is None:
            self.removal_gain(x)
            inner_gain = self._pending[("rem", x)]
        self._inner.remove(x, inner_gain)
        self._pending.clear()
        new_value = min(self._inner.value, self.oracle.tau)
        delta = new_value - self.value
        self.value = new_value
        return delta

    def copy(self):
        dup = object.__new__(_TruncatedState)
        dup.oracle = self.oracle
        dup._inner = self._inner.copy()
        dup.members = dup._inner.members
        dup.value = self.value
        dup._pending = {}
        return dup


def truncate(oracle, tau):
    """Oracle computing min(f, tau); preserves monotonicity/submodularity."""
    return TruncatedOracle(oracle, tau)


def query_count(oracle):
    """Current value of the oracle's query counter."""
    return oracle.query_count


@dataclass(frozen=True)
class CoverInstance:
    """A cover instance: reach f >= tau with as few elements as possible."""

    oracle: SetFunctionOracle
    tau: float

    def __post_init__(self):
        if self.tau < 0:
            raise InputError(f"tau must be non-negative, got {self.tau}")

    def feasible(self):
        """Whether f(U) >= tau; only meaningful for monotone objectives."""
        if not self.oracle.monotone:
            raise InputError("feasibility shortcut requires a monotone oracle")
        return self.oracle.peek(range(self.oracle.n)) >= self.tau - TOL


@dataclass(frozen=True)
class SmpInstance:
    """A cardinality-constrained maximization instance, optionally on a subset."""

    oracle: SetFunctionOracle
    kappa: int
    ground: tuple = None

    def __post_init__(self):
        if self.kappa < 1:
            raise InputError(f"budget must be at least 1, got {self.kappa}")
        if self.kappa > self.oracle.n:
            raise InputError("budget exceeds the ground set size")
        if self.ground is not None:
            object.__setattr__(
                self, "ground", tuple(sorted(self.oracle._check_members(self.ground)))
            )

    def ground_ids(self):
        if self.ground is None:
            return tuple(range(self.oracle.n))
        return self.ground


def make_synthetic_summarization(m, n, p_head, p_tail, head_size, seed):
    """Random tag-coverage instance with a dense head and a sparse tail.

    Each element carries tag i < head_size independently with probability
    p_head and every later tag with probability p_tail.  Deterministic for a
    fixed seed.
    """
    if not (0 <= p_head <= 1 and 0 <= p_tail <= 1):
        raise InputError("tag probabilities must lie in [0, 1]")
    if head_size > m or head_size < 0:
        raise InputError("head_size must lie in [0, m]")
    rng = np.random.default_rng(seed)
    probs = np.full(m, p_tail)
    probs[:head_size] = p_head
    tag_sets = []
    for _ in range(n):
        row = rng.random(m) < probs
        tag_sets.append(np.flatnonzero(row).tolist())
    return CoverageOracle(tag_sets, total_tags=m, name="synthetic")


@dataclass(frozen=True)
class TightnessInstance:
    """Set-cover instance on which plain greedy needs ~log(1/eps) * k picks.

    Element ids: the "slice" sets come first (ids 0..), then the k "group"
    sets; greedy's lowest-id tie-break therefore prefers slices, which is
    what makes the construction bite.
    """

    oracle: CoverageOracle
    tau: float
    slice_ids: tuple
    group_ids: tuple
    k: int
    l: int


def make_greedy_tightness_instance(k, l):
    """Build the adversarial cover instance with optimal size exactly k.

    Tags form k groups of l each.  Group set i covers all of group i.  Slice
    set j covers ceil(U_j / k) still-uncovered tags, always taken from the
    groups with the most uncovered tags, so its greedy gain ties the best
    group set at every step.  Non-divisible l is padded up to a multiple of k.
    """
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    if l < 1:
        raise InputError(f"l must be positive, got {l}")
    if l % k:
        l += k - (l % k)
    remaining = [l] * k
    next_tag = [i * l for i in range(k)]
    slices = []
    total_left = k * l
    while total_left:
        take = math.ceil(total_left / k)
        tags = []
        for _ in range(take):
            grp = max(range(k), key=lambda i: (remaining[i], -i))
            tags.append(next_tag[grp])
            next_tag[grp] += 1
            remaining[grp] -= 1
        slices.append(tags)
        total_left -= take
    groups = [list(range(i * l, (i + 1) * l)) for i in range(k)]
    oracle = CoverageOracle(slices + groups, total_tags=k * l, name="tightness")
    m = len(slices)
    return TightnessInstance(
        oracle=oracle,
        tau=float(k * l),
        slice_ids=tuple(range(m)),
        group_ids=tuple(range(m, m + k)),
        k=k,
        l=l,
    )


@dataclass(frozen=True)
class RegularizedInstance:
    """Monotone objective g minus a modular non-negative cost c.

    Carries a budget (for maximization) or a threshold (for cover), or both.
    """

    oracle: SetFunctionOracle
    costs: np.ndarray
    kappa: int = None
    tau: float = None

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.shape != (self.oracle.n,):
            raise InputError("cost vector length must match the ground set size")
        if (costs < 0).any():
            raise InputError("costs must be non-negative")
        object.__setattr__(self, "costs", costs)
        if self.kappa is not None and self.kappa < 1:
            raise InputError(f"budget must be at least 1, got {self.kappa}")

    def cost(self, S):
        return float(sum(self.costs[x] for x in S))

    def with_scaled_costs(self, factor, kappa=None):
        return RegularizedInstance(
            self.oracle, self.costs * factor, kappa=kappa, tau=self.tau
        )
