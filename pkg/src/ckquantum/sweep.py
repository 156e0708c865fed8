"""Exhaustive sweeps over signatures, permutations and J factors."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial

from .catalog import CatalogEntry, catalog
from .checker import _slots_mask, canonical_sigmas, j_space
from .classical import Signature
from .kernel import SweepKernel

__all__ = [
    "BudgetExceeded",
    "SweepRecord",
    "SweepResult",
    "CatalogDiff",
    "enumerate_admissible",
    "compare_to_catalog",
    "sweep_size",
    "default_workers",
    "WORKERS_ENV",
]

WORKERS_ENV = "CKQUANTUM_WORKERS"
SIGMA_MODES = ("full", "canonical")


class BudgetExceeded(RuntimeError):
    """The requested sweep has more candidates than the configured limit."""

    def __init__(self, size: int, budget: int):
        super().__init__(f"sweep needs {size} candidate checks, budget is {budget}; "
                         "try --sigma-mode canonical or a larger --budget")
        self.size = size
        self.budget = budget


@dataclass(frozen=True, order=True)
class SweepRecord:
    """One admissible candidate; ``J`` empty means J = 1."""

    nil: tuple
    J: tuple
    sigma: tuple

    def key(self) -> tuple:
        return (frozenset(self.nil), frozenset(self.J))


@dataclass
class SweepResult:
    N: int
    sigma_mode: str
    with_rtt: bool
    records: set = field(default_factory=set)
    # (nil, J) -> Counter of the first failing condition over all sigma
    failures: dict = field(default_factory=dict)
    # (nil, J, sigma) of admissible candidates that fail RTT
    rtt_failures: set = field(default_factory=set)
    checked: int = 0

    def projection(self, nontrivial: bool = True) -> set:
        return {r.key() for r in self.records if r.nil or not nontrivial}

    def sigmas_for(self, nil, J=()) -> list:
        nil, J = tuple(sorted(nil)), tuple(sorted(J))
        return sorted(r.sigma for r in self.records if r.nil == nil and r.J == J)


@dataclass
class CatalogDiff:
    missing: list
    extra: list

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _sigma_list(N, sig, mode):
    if mode == "full":
        return list(permutations(range(1, N + 1)))
    if mode == "canonical":
        return canonical_sigmas(N, sig)
    raise ValueError(f"sigma_mode must be one of {SIGMA_MODES}")


def sweep_size(N: int, sigma_mode: str = "full") -> int:
    """Number of (sigma, j, J) candidates the sweep will examine."""
    total = 0
    for sig in Signature.all(N):
        n_sigma = factorial(N) if sigma_mode == "full" else len(canonical_sigmas(N, sig))
        total += n_sigma * (1 << len(sig.nil))
    return total


@lru_cache(maxsize=4)
def _kernel(N, with_rtt, forbid_lost, rule):
    return SweepKernel(N, with_rtt, forbid_lost, rule)


def _sweep_signature(args):
    N, nil, mode, with_rtt, forbid_lost, rule = args
    sig = Signature(N, frozenset(nil))
    K = _kernel(N, with_rtt, forbid_lost, rule)
    records, failures, rtt_bad, checked = [], [], [], 0
    Js = j_space(sig)
    for sigma in _sigma_list(N, sig, mode):
        m = K.masks(sigma, sig)
        for J in Js:
            checked += 1
            Jm = _slots_mask(J)
            key = (tuple(sorted(nil)), tuple(sorted(J)))
            if not K.antipode_ok(m, Jm):
                failures.append((key, "antipode"))
                continue
            if not K.orthogonality_ok(m, Jm):
                failures.append((key, "orthogonality"))
                continue
            if with_rtt and not K.rtt_ok(m, Jm):
                rtt_bad.append(key + (sigma,))
            records.append(key + (sigma,))
    return records, failures, rtt_bad, checked


def enumerate_admissible(N: int, sigma_mode: str = "full", with_rtt: bool = False,
                         budget: int | None = None, workers: int | None = None,
                         forbid_lost: bool = True, rule: str = "rank") -> SweepResult:
    """All admissible ``(nil, J, sigma)`` over every signature of size N.

    RTT, when enabled, is report-only: candidates failing it stay in
    ``records`` and are listed in ``rtt_failures``.
    """
    if sigma_mode not in SIGMA_MODES:
        raise ValueError(f"sigma_mode must be one of {SIGMA_MODES}")
    if budget is not None:
        size = sweep_size(N, sigma_mode)
        if size > budget:
            raise BudgetExceeded(size, budget)
    workers = default_workers() if workers is None else workers
    tasks = [(N, tuple(sorted(sig.nil)), sigma_mode, with_rtt, forbid_lost, rule)
             for sig in Signature.all(N)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_sweep_signature, tasks))
    else:
        parts = [_sweep_signature(t) for t in tasks]
    result = SweepResult(N, sigma_mode, with_rtt)
    for records, failures, rtt_bad, checked in parts:
        result.records.update(SweepRecord(*r) for r in records)
        for key, cond in failures:
            result.failures.setdefault(key, Counter())[cond] += 1
        result.rtt_failures.update(rtt_bad)
        result.checked += checked
    return result


def _fmt_key(key) -> dict:
    nil, J = key
    return {"nil": sorted(nil), "J": sorted(J)}


def compare_to_catalog(enumerated, N: int, entries: set | None = None) -> CatalogDiff:
    """Two-way difference of ``(nil, J)`` projections; the uncontracted
    entry (no nilpotent slot) is left out on both sides.

    ``enumerated`` is a :class:`SweepResult` or an iterable of records.
    ``missing`` lists catalog keys the sweep did not find, with the
    theorem items that predict them; ``extra`` lists admissible keys no
    theorem predicts, with a witness sigma.
    """
    records = enumerated.records if isinstance(enumerated, SweepResult) else set(enumerated)
    entries = catalog(N) if entries is None else entries
    found: dict = {}
    for r in sorted(records):
        if r.nil:
            found.setdefault(r.key(), r.sigma)
    predicted: dict = {}
    for e in entries:
        # an item whose sigma range is empty at this N predicts nothing
        if e.nil and e.sigma_witness is not None:
            predicted.setdefault(e.key(), []).append(e)
    missing = []
    for key in sorted(set(predicted) - set(found), key=_sort_key):
        srcs = sorted({e.source for e in predicted[key]})
        wit = min(e.sigma_witness for e in predicted[key])
        missing.append(dict(_fmt_key(key), sources=srcs, sigma=list(wit)))
    extra = [dict(_fmt_key(key), sigma=list(found[key]))
             for key in sorted(set(found) - set(predicted), key=_sort_key)]
    return CatalogDiff(missing, extra)


def _sort_key(key):
    nil, J = key
    return (sorted(nil), sorted(J))
