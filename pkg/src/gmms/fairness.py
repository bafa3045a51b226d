"""Verifiers for every fairness notion on complete allocations.

Each checker returns a FairnessReport; a failed report carries a violation
witness whose inequality re-evaluates exactly as reported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Allocation, InputError, Instance, bundle_value
from .maximin import (gmms_threshold, iter_groups, maximin_exceeds,
                      maximin_share, mms)


class Notion(str, enum.Enum):
    EF = "EF"
    EF1 = "EF1"
    EFX = "EFX"
    EFL = "EFL"
    MMS = "MMS"
    PMMS = "PMMS"
    KWISE = "KWISE"
    GMMS = "GMMS"


@dataclass(frozen=True)
class Violation:
    """A concrete counterexample: lhs < rhs for the reported comparison."""

    agent: int
    other: Optional[tuple] = None   # envied agent (i,) or group
    good: Optional[int] = None
    partition: Optional[tuple] = None
    lhs: Fraction = Fraction(0)
    rhs: Fraction = Fraction(0)

    def to_doc(self) -> dict:
        doc = {"agent": self.agent, "lhs": str(self.lhs), "rhs": str(self.rhs)}
        if self.other is not None:
            doc["other"] = list(self.other)
        if self.good is not None:
            doc["good"] = self.good
        if self.partition is not None:
            doc["partition"] = [sorted(b) for b in self.partition]
        return doc


@dataclass(frozen=True)
class FairnessReport:
    notion: Notion
    holds: bool
    witness: Optional[Violation] = None
    k: Optional[int] = None  # set for KWISE reports

    def to_doc(self) -> dict:
        doc = {"notion": self.notion.value, "holds": self.holds}
        if self.k is not None:
            doc["k"] = self.k
        if self.witness is not None:
            doc["witness"] = self.witness.to_doc()
        return doc


def _own_values(instance: Instance, allocation: Allocation):
    return [bundle_value(instance, i, allocation.bundles[i])
            for i in range(instance.num_agents)]


def _require_complete(instance: Instance, allocation: Allocation):
    allocation.validate(instance, require_complete=True)


def is_envy_free(instance: Instance, allocation: Allocation) -> FairnessReport:
    """v_i(A_i) >= v_i(A_j) for all pairs."""
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        for j in range(instance.num_agents):
            if i == j:
                continue
            rhs = bundle_value(instance, i, allocation.bundles[j])
            if own[i] < rhs:
                return FairnessReport(Notion.EF, False,
                                      Violation(i, (j,), lhs=own[i], rhs=rhs))
    return FairnessReport(Notion.EF, True)


def is_ef1(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Some single good removed from the envied bundle kills the envy.

    Empty envied bundles never violate: v_i(A_i) >= 0 = v_i(empty).
    """
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        row = instance.valuations[i]
        for j in range(instance.num_agents):
            if i == j or not allocation.bundles[j]:
                continue
            total = bundle_value(instance, i, allocation.bundles[j])
            top = max(allocation.bundles[j], key=lambda g: (row[g], -g))
            if own[i] < total - row[top]:
                return FairnessReport(Notion.EF1, False,
                                      Violation(i, (j,), good=top,
                                                lhs=own[i], rhs=total - row[top]))
    return FairnessReport(Notion.EF1, True)


def is_efx(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Removing any positively valued good from the envied bundle kills the envy."""
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        row = instance.valuations[i]
        for j in range(instance.num_agents):
            if i == j:
                continue
            total = bundle_value(instance, i, allocation.bundles[j])
            for g in sorted(allocation.bundles[j]):
                if row[g] > 0 and own[i] < total - row[g]:
                    return FairnessReport(Notion.EFX, False,
                                          Violation(i, (j,), good=g,
                                                    lhs=own[i], rhs=total - row[g]))
    return FairnessReport(Notion.EFX, True)


def is_efl(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Either the envied bundle holds at most one positively valued good, or
    some good both kills the envy when removed and is worth no more than the
    envious agent's own bundle."""
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        row = instance.valuations[i]
        for j in range(instance.num_agents):
            if i == j:
                continue
            positives = [g for g in allocation.bundles[j] if row[g] > 0]
            if len(positives) <= 1:
                continue
            total = bundle_value(instance, i, allocation.bundles[j])
            ok = any(own[i] >= total - row[g] and own[i] >= row[g]
                     for g in allocation.bundles[j])
            if not ok:
                top = max(allocation.bundles[j], key=lambda g: (row[g], -g))
                rhs = total - row[top] if own[i] < total - row[top] else row[top]
                return FairnessReport(Notion.EFL, False,
                                      Violation(i, (j,), good=top,
                                                lhs=own[i], rhs=rhs))
    return FairnessReport(Notion.EFL, True)


def is_mms(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Every agent's bundle clears her grand-bundle maximin share."""
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        result = mms(instance, i)
        if own[i] < result.value:
            return FairnessReport(Notion.MMS, False,
                                  Violation(i, partition=result.witness,
                                            lhs=own[i], rhs=result.value))
    return FairnessReport(Notion.MMS, True)


def is_pmms(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Every agent clears her 2-part share over her own plus any other bundle."""
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        for j in range(instance.num_agents):
            if i == j:
                continue
            pooled = allocation.bundles[i] | allocation.bundles[j]
            if maximin_exceeds(instance, i, pooled, 2, own[i]):
                result = maximin_share(instance, i, pooled, 2)
                return FairnessReport(Notion.PMMS, False,
                                      Violation(i, (j,), partition=result.witness,
                                                lhs=own[i], rhs=result.value))
    return FairnessReport(Notion.PMMS, True)


def is_kwise_fair(instance: Instance, allocation: Allocation, k: int) -> FairnessReport:
    """Every agent clears her k-part share over every size-k group's pool."""
    _require_complete(instance, allocation)
    if not 1 <= k <= instance.num_agents:
        raise InputError(f"k must be in [1, {instance.num_agents}], got {k}")
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        for group in iter_groups(instance.num_agents, i, size=k):
            pooled = frozenset().union(*(allocation.bundles[j] for j in group))
            if maximin_exceeds(instance, i, pooled, k, own[i]):
                result = maximin_share(instance, i, pooled, k)
                return FairnessReport(Notion.KWISE, False,
                                      Violation(i, group, partition=result.witness,
                                                lhs=own[i], rhs=result.value),
                                      k=k)
    return FairnessReport(Notion.KWISE, True, k=k)


def is_gmms(instance: Instance, allocation: Allocation) -> FairnessReport:
    """Every agent clears her share for every group containing her.

    Groups with empty-bundle co-members are skipped: the reduced group pools
    the same goods into fewer parts, so its share dominates.
    """
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    for i in range(instance.num_agents):
        for group in iter_groups(instance.num_agents, i):
            if any(j != i and not allocation.bundles[j] for j in group):
                continue
            pooled = frozenset().union(*(allocation.bundles[j] for j in group))
            if maximin_exceeds(instance, i, pooled, len(group), own[i]):
                result = maximin_share(instance, i, pooled, len(group))
                return FairnessReport(Notion.GMMS, False,
                                      Violation(i, group, partition=result.witness,
                                                lhs=own[i], rhs=result.value))
    return FairnessReport(Notion.GMMS, True)


def gmms_factor(instance: Instance, allocation: Allocation) -> Optional[Fraction]:
    """min_i v_i(A_i) / threshold_i, skipping zero thresholds.

    Returns None for +infinity (every threshold is zero): the allocation is
    alpha-fair for every alpha.
    """
    _require_complete(instance, allocation)
    own = _own_values(instance, allocation)
    factor: Optional[Fraction] = None
    for i in range(instance.num_agents):
        threshold = gmms_threshold(instance, allocation, i).value
        if threshold == 0:
            continue
        ratio = own[i] / threshold
        if factor is None or ratio < factor:
            factor = ratio
    return factor


CHECKERS = {
    Notion.EF: is_envy_free,
    Notion.EF1: is_ef1,
    Notion.EFX: is_efx,
    Notion.EFL: is_efl,
    Notion.MMS: is_mms,
    Notion.PMMS: is_pmms,
    Notion.GMMS: is_gmms,
}
