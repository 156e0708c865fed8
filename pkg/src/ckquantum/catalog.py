"""Executable statements of the four contraction theorems.

Each theorem item becomes one or more :class:`CatalogEntry` objects: a
nilpotent slot set, a J factor (as a set of slots, empty for J = 1), a
predicate on sigma and an example sigma.  Slots that a theorem lists as
"``j_k = 1, iota_k``" are expanded into explicit entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations, permutations
from typing import Callable

from .classical import Signature, bracket_mask, half, identity_perm, prime

__all__ = [
    "CatalogEntry",
    "theorem1_sets",
    "theorem2_sets",
    "theorem3_sets",
    "theorem4_sets",
    "catalog",
    "remark2_closure",
    "remark1_holds",
    "projection",
]


def _always(sigma) -> bool:
    return True


@dataclass(frozen=True)
class CatalogEntry:
    N: int
    nil: frozenset
    J: frozenset
    sigma_witness: tuple | None
    source: str
    predicate: Callable = field(default=_always, compare=False, hash=False)
    constraint: str = field(default="", compare=False)

    def key(self) -> tuple:
        return (self.nil, self.J)

    def admits(self, sigma) -> bool:
        return self.predicate(tuple(sigma))

    def witnesses(self):
        """All sigma in S(N) satisfying the predicate (brute force)."""
        return [s for s in permutations(range(1, self.N + 1))
                if self.predicate(s)]


def _subsets(xs):
    xs = sorted(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def remark1_holds(N: int, sigma, sig: Signature, skip_middle_pair: bool | None = None) -> bool:
    """``(sigma_k, sigma_k') = 1`` for k = 1..n (k = 1..n-1 for even N)."""
    n = half(N)
    top = n - 1 if (N % 2 == 0 if skip_middle_pair is None else skip_middle_pair) else n
    return all(bracket_mask(sigma[k - 1], sigma[prime(k, N) - 1], sig) == 0
               for k in range(1, top + 1))


def _check_odd(N):
    if N % 2 == 0 or N < 3:
        raise ValueError(f"N = {N}: theorem needs odd N = 2n + 1 >= 3")
    return half(N)


def _check_even(N):
    if N % 2 or N < 4:
        raise ValueError(f"N = {N}: theorem needs even N = 2n >= 4")
    return half(N)


def _perm_from(N, assign: dict) -> tuple | None:
    """The theorem's example sigma, or None when the index ranges collide."""
    if sorted(assign) != list(range(1, N + 1)):
        return None
    sigma = tuple(assign[i] for i in range(1, N + 1))
    if sorted(sigma) != list(range(1, N + 1)):
        return None
    return sigma


def _witness(N, example, pred):
    """Prefer the printed example; otherwise the first sigma in
    lexicographic order that satisfies the predicate."""
    if example is not None and pred(example):
        return example
    return next((s for s in permutations(range(1, N + 1)) if pred(s)), None)


def theorem1_sets(N: int, closure: bool = False) -> set:
    """Maximal contractions with J = 1 for N = 2n + 1, one per m = 0..n."""
    n = _check_odd(N)
    out = set()
    for m in range(0, n + 1):
        nil = frozenset([2 * s for s in range(1, m + 1)]
                        + [2 * r + 1 for r in range(m, n)])
        assign = {n + 1: 2 * m + 1}
        for s in range(1, m + 1):
            assign[s] = 2 * s - 1
            assign[prime(s, N)] = 2 * s
        for r in range(m + 1, n + 1):
            assign[r] = 2 * r
            assign[prime(r, N)] = 2 * r + 1
        pred = _remark1_pred(N, nil)
        sigma = _witness(N, _perm_from(N, assign), pred)
        out.add(CatalogEntry(N, nil, frozenset(), sigma, f"T1 m={m}",
                             pred, "Remark 1"))
    return remark2_closure(out) if closure else out


def theorem2_sets(N: int, closure: bool = False) -> set:
    """Maximal contractions with J = 1 for N = 2n, one per 1 <= m <= u <= n."""
    n = _check_even(N)
    out = set()
    for m in range(1, n + 1):
        for u in range(m, n + 1):
            nil = frozenset([2 * s for s in range(1, m)]
                            + [2 * p - 1 for p in range(m, u + 1)]
                            + [2 * r for r in range(u, n)])
            nil = frozenset(k for k in nil if 1 <= k <= N - 1)
            assign = {n: 2 * m - 1, prime(n, N): 2 * u}
            for s in range(1, m):
                assign[s] = 2 * s - 1
                assign[prime(s, N)] = 2 * s
            for p in range(m, u):
                assign[p] = 2 * p
                assign[prime(p, N)] = 2 * p + 1
            for r in range(u, n):
                assign[r] = 2 * r + 1
                assign[prime(r, N)] = 2 * r
            pred = _remark1_pred(N, nil)
            sigma = _witness(N, _perm_from(N, assign), pred)
            out.add(CatalogEntry(N, nil, frozenset(), sigma, f"T2 m={m} u={u}",
                                 pred, "Remark 1"))
    return remark2_closure(out) if closure else out


def _remark1_pred(N, nil):
    sig = Signature(N, nil)
    return lambda sigma: remark1_holds(N, sigma, sig)


def _expand(N, source, fixed, optional, J, pred, text):
    """Entries for ``fixed`` slots nilpotent plus any subset of ``optional``;
    J keeps only its nilpotent slots; an emptied J is not J != 1 and the
    entry is dropped."""
    out = set()
    for extra in _subsets(optional):
        nil = frozenset(fixed) | frozenset(extra)
        if not nil:
            continue
        Jn = frozenset(J) & nil
        if not Jn:
            continue
        witness = _witness(N, None, pred)
        out.add(CatalogEntry(N, nil, Jn, witness, source, pred, text))
    return out


def theorem3_sets(N: int) -> set:
    """Contractions with J != 1 for N = 2n + 1."""
    n = _check_odd(N)
    mid = n + 1
    out = set()

    def s_mid(sigma):
        return sigma[mid - 1]

    out |= _expand(N, "T3.1a", [n + 1], [], [n + 1],
                   lambda s: 1 < s_mid(s) < n + 1, "1 < s_{n+1} < n+1")
    out |= _expand(N, "T3.1b", [n + 1], [1], [n + 1],
                   lambda s: s_mid(s) == 1, "s_{n+1} = 1")
    out |= _expand(N, "T3.2a", [n], [], [n],
                   lambda s: n + 1 < s_mid(s) < 2 * n + 1, "n+1 < s_{n+1} < 2n+1")
    out |= _expand(N, "T3.2b", [n], [2 * n], [n],
                   lambda s: s_mid(s) == 2 * n + 1, "s_{n+1} = 2n+1")
    out |= _expand(N, "T3.3", [], [n, n + 1], [n, n + 1],
                   lambda s: s_mid(s) == n + 1, "s_{n+1} = n+1")
    return out


def theorem4_sets(N: int) -> set:
    """Contractions with J != 1 for N = 2n."""
    n = _check_even(N)
    nn = prime(n, N)  # n' = n + 1
    out = set()

    def a(s):
        return s[n - 1]

    def b(s):
        return s[nn - 1]

    items = [
        ("T4.1a", [n], [], [n], lambda s: a(s) > 1 and b(s) < 2 * n,
         "s_n > 1, s_n' < 2n"),
        ("T4.1b", [n], [1], [n], lambda s: a(s) == 1 and b(s) < 2 * n,
         "s_n = 1, s_n' < 2n"),
        ("T4.1c", [n], [2 * n - 1], [n], lambda s: a(s) > 1 and b(s) == 2 * n,
         "s_n > 1, s_n' = 2n"),
        ("T4.1d", [n], [1, 2 * n - 1], [n], lambda s: a(s) == 1 and b(s) == 2 * n,
         "s_n = 1, s_n' = 2n"),
        ("T4.2a", [n - 1], [], [n - 1], lambda s: b(s) < 2 * n, "s_n' < 2n"),
        ("T4.2b", [n - 1], [2 * n - 1], [n - 1],
         lambda s: a(s) < 2 * n - 1 and b(s) == 2 * n, "s_n < 2n-1, s_n' = 2n"),
        ("T4.2c", [n - 1], [2 * n - 2, 2 * n - 1], [n - 1],
         lambda s: a(s) == 2 * n - 1 and b(s) == 2 * n, "s_n = 2n-1, s_n' = 2n"),
        ("T4.3a", [n + 1], [], [n + 1], lambda s: a(s) > 1, "s_n > 1"),
        ("T4.3b", [n + 1], [1], [n + 1], lambda s: a(s) == 1 and b(s) > 2,
         "s_n = 1, s_n' > 2"),
        ("T4.3c", [n + 1], [1, 2], [n + 1], lambda s: a(s) == 1 and b(s) == 2,
         "s_n = 1, s_n' = 2"),
        ("T4.4a", [n - 1, n], [], [n - 1, n], lambda s: b(s) < 2 * n, "s_n' < 2n"),
        ("T4.4b", [n - 1, n], [2 * n - 1], [n - 1, n], lambda s: b(s) == 2 * n,
         "s_n' = 2n"),
        ("T4.5a", [n, n + 1], [], [n, n + 1], lambda s: a(s) > 1, "s_n > 1"),
        ("T4.5b", [n, n + 1], [1], [n, n + 1], lambda s: a(s) == 1, "s_n = 1"),
        ("T4.6", [], [n - 1, n, n + 1], [n - 1, n, n + 1],
         lambda s: a(s) == n and b(s) == n + 1, "s_n = n, s_n' = n+1"),
    ]
    for source, fixed, optional, J, pred, text in items:
        fixed = [k for k in fixed if 1 <= k <= N - 1]
        optional = [k for k in optional if 1 <= k <= N - 1 and k not in fixed]
        J = [k for k in J if 1 <= k <= N - 1]
        out |= _expand(N, source, fixed, optional, J, pred, text)
    return out


def remark2_closure(entries: set) -> set:
    """Close J = 1 entries under "set part of the slots equal to one".

    Entries with J != 1 are passed through: their optional slots are
    already expanded by the theorem generators.
    """
    out = set(entries)
    for e in entries:
        if e.J:
            continue
        for sub in _subsets(e.nil):
            sub = frozenset(sub)
            if not sub or sub == e.nil:
                continue
            out.add(CatalogEntry(e.N, sub, frozenset(), e.sigma_witness,
                                 e.source + " (Remark 2)",
                                 _remark1_pred(e.N, sub), "Remark 1"))
    return out


def catalog(N: int) -> set:
    """All theorem entries for N under Remark-2 closure."""
    if N % 2:
        return theorem1_sets(N, closure=True) | theorem3_sets(N)
    return theorem2_sets(N, closure=True) | theorem4_sets(N)


def projection(entries) -> set:
    """``{(nil, J)}`` pairs, the granularity at which theorems are compared."""
    return {e.key() for e in entries}
