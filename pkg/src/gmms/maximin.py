"""Exact maximin-share computation.

``maximin_share`` is the production search: integer-scaled branch-and-bound
over restricted-growth assignments with a water-filling upper bound.
``maximin_share_naive`` is the unpruned enumeration oracle used to cross-check
it. ``gmms_threshold`` maximizes the share over all agent groups of a complete
allocation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .core import (Allocation, Bundle, Fraction, InputError, Instance,
                   bundle_value, check_bundle)

NAIVE_GOODS_LIMIT = 14


@dataclass(frozen=True)
class MaximinResult:
    """A share value together with a witness partition attaining it."""

    value: Fraction
    witness: tuple  # of Bundle, exactly `parts` entries (empty bundles allowed)

    def to_doc(self) -> dict:
        return {"value": str(self.value),
                "witness": [sorted(b) for b in self.witness]}


@dataclass(frozen=True)
class GmmsThreshold:
    """Best maximin share of one agent over any group containing her."""

    value: Fraction
    witness_group: tuple  # sorted agent indices
    witness_partition: tuple  # of Bundle


def _scale(values: Iterable[Fraction]) -> int:
    denom = 1
    for v in values:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    return denom


def _waterfill_ok(sums, floor_level, remaining) -> bool:
    """Can every bundle be raised to at least floor_level using `remaining`?

    Fractional relaxation; a False answer proves no completion reaches
    min >= floor_level.
    """
    need = 0
    for s in sums:
        if s < floor_level:
            need += floor_level - s
            if need > remaining:
                return False
    return True


def _lpt_seed(vals, k):
    """Greedy longest-first assignment; a quick lower bound on the optimum."""
    sums = [0] * k
    assign = [0] * len(vals)
    for t, v in enumerate(vals):
        j = min(range(k), key=lambda b: sums[b])
        sums[j] += v
        assign[t] = j
    return min(sums), assign


def _max_min_partition(vals, k):
    """Exact max-min k-partition of positive integers (descending order).

    Returns (best_min, assignment). Restricted-growth canonical form plus
    equal-sum skipping kill bundle symmetry; subtrees that cannot beat the
    incumbent (by water-filling) are pruned.
    """
    p = len(vals)
    suffix = [0] * (p + 1)
    for i in range(p - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]
    cap = suffix[0] // k  # averaging bound: optimum <= floor(total/k)
    best, best_assign = _lpt_seed(vals, k)
    if best >= cap:
        return best, best_assign
    sums = [0] * k
    assign = [0] * p

    def dfs(t, used):
        nonlocal best, best_assign
        if t == p:
            m = min(sums)
            if m > best:
                best, best_assign = m, assign[:]
            return best >= cap
        limit = min(used + 1, k)
        tried = set()
        for j in range(limit):
            s = sums[j]
            if s in tried:
                continue
            tried.add(s)
            sums[j] = s + vals[t]
            assign[t] = j
            if _waterfill_ok(sums, best + 1, suffix[t + 1]):
                if dfs(t + 1, max(used, j + 1)):
                    sums[j] = s
                    return True
            sums[j] = s
        return False

    dfs(0, 0)
    return best, best_assign


def _exists_partition_above(vals, k, target) -> bool:
    """Is there a k-partition of positive ints `vals` with min > target?"""
    p = len(vals)
    if p < k:
        return 0 > target
    suffix = [0] * (p + 1)
    for i in range(p - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]
    if suffix[0] < k * (target + 1):
        return False
    seed, _ = _lpt_seed(vals, k)
    if seed > target:
        return True
    sums = [0] * k

    def dfs(t, used):
        if t == p:
            return min(sums) > target
        limit = min(used + 1, k)
        tried = set()
        for j in range(limit):
            s = sums[j]
            if s in tried:
                continue
            tried.add(s)
            sums[j] = s + vals[t]
            if _waterfill_ok(sums, target + 1, suffix[t + 1]):
                if dfs(t + 1, max(used, j + 1)):
                    sums[j] = s
                    return True
            sums[j] = s
        return False

    return dfs(0, 0)


def _split_goods(instance: Instance, agent: int, goods: Bundle):
    """Positively valued goods sorted by descending value (index tiebreak)."""
    row = instance.valuations[agent]
    positive = sorted((g for g in goods if row[g] > 0),
                      key=lambda g: (-row[g], g))
    zero = [g for g in sorted(goods) if row[g] == 0]
    return positive, zero


def maximin_share(instance: Instance, agent: int, goods, parts: int) -> MaximinResult:
    """mu_agent^parts(goods): exact max over partitions of the min bundle value.

    Zero-valued goods never affect the value; they are stripped before the
    search and returned in the first witness bundle.
    """
    if parts < 1:
        raise InputError(f"parts must be >= 1, got {parts}")
    if not 0 <= agent < instance.num_agents:
        raise InputError(f"agent index {agent} out of range")
    goods = check_bundle(instance, goods)
    positive, zero = _split_goods(instance, agent, goods)
    row = instance.valuations[agent]
    witness = [set() for _ in range(parts)]
    if len(positive) < parts:
        for j, g in enumerate(positive):
            witness[j].add(g)
        value = Fraction(0)
    elif parts == 1:
        witness[0].update(positive)
        value = bundle_value(instance, agent, positive)
    else:
        denom = _scale(row[g] for g in positive)
        vals = [int(row[g] * denom) for g in positive]
        best, assign = _max_min_partition(vals, parts)
        for g, j in zip(positive, assign):
            witness[j].add(g)
        value = Fraction(best, denom)
    witness[0].update(zero)
    return MaximinResult(value, tuple(frozenset(b) for b in witness))


def maximin_exceeds(instance: Instance, agent: int, goods, parts: int,
                    threshold: Fraction) -> bool:
    """True iff mu_agent^parts(goods) > threshold (no witness; early exit)."""
    if parts < 1:
        raise InputError(f"parts must be >= 1, got {parts}")
    goods = check_bundle(instance, goods)
    positive, _ = _split_goods(instance, agent, goods)
    row = instance.valuations[agent]
    if len(positive) < parts:
        return 0 > threshold
    denom = _scale(row[g] for g in positive)
    denom = denom * threshold.denominator // gcd(denom, threshold.denominator)
    vals = [int(row[g] * denom) for g in positive]
    return _exists_partition_above(vals, parts, int(threshold * denom))


def maximin_share_naive(instance: Instance, agent: int, goods, parts: int) -> MaximinResult:
    """Unpruned enumeration oracle; same contract as maximin_share.

    Enumerates every restricted-growth assignment of `goods` to `parts`
    bundles and takes the exact max of the min. Guarded to small inputs.
    """
    if parts < 1:
        raise InputError(f"parts must be >= 1, got {parts}")
    if not 0 <= agent < instance.num_agents:
        raise InputError(f"agent index {agent} out of range")
    goods = sorted(check_bundle(instance, goods))
    if len(goods) > NAIVE_GOODS_LIMIT:
        raise InputError(
            f"naive enumeration limited to {NAIVE_GOODS_LIMIT} goods, got {len(goods)}")
    row = instance.valuations[agent]
    best = Fraction(-1)
    best_assign = [0] * len(goods)
    assign = [0] * len(goods)

    def enumerate_rgs(t, used):
        nonlocal best, best_assign
        if t == len(goods):
            sums = [Fraction(0)] * parts
            for g, j in zip(goods, assign):
                sums[j] += row[g]
            m = min(sums)
            if m > best:
                best, best_assign = m, assign[:]
            return
        for j in range(min(used + 1, parts)):
            assign[t] = j
            enumerate_rgs(t + 1, max(used, j + 1))

    enumerate_rgs(0, 0)
    if best < 0:  # empty goods set
        best = Fraction(0)
    witness = [set() for _ in range(parts)]
    for g, j in zip(goods, best_assign):
        witness[j].add(g)
    return MaximinResult(best, tuple(frozenset(b) for b in witness))


def mms(instance: Instance, agent: int) -> MaximinResult:
    """Maximin share over the grand bundle with n parts."""
    return maximin_share(instance, agent, instance.all_goods(), instance.num_agents)


def iter_groups(num_agents: int, agent: int, size: Optional[int] = None):
    """Groups containing `agent`, by increasing size then lexicographic."""
    sizes = range(1, num_agents + 1) if size is None else (size,)
    for k in sizes:
        for combo in itertools.combinations(range(num_agents), k):
            if agent in combo:
                yield combo


def gmms_threshold(instance: Instance, allocation: Allocation, agent: int) -> GmmsThreshold:
    """Max over groups J containing `agent` of mu_agent^|J|(union of J's bundles).

    Groups containing another agent with an empty bundle are skipped: dropping
    such an agent keeps the pooled goods and lowers the part count, which can
    only raise the share, so the reduced group dominates.
    """
    allocation.validate(instance, require_complete=True)
    if not 0 <= agent < instance.num_agents:
        raise InputError(f"agent index {agent} out of range")
    best: Optional[GmmsThreshold] = None
    for group in iter_groups(instance.num_agents, agent):
        if any(j != agent and not allocation.bundles[j] for j in group):
            continue
        pooled = frozenset().union(*(allocation.bundles[j] for j in group))
        result = maximin_share(instance, agent, pooled, len(group))
        if best is None or result.value > best.value:
            best = GmmsThreshold(result.value, tuple(group), result.witness)
    assert best is not None
    return best
