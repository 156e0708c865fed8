"""Admissibility of a contraction candidate ``(N, sigma, j, J)``.

Two conditions decide admissibility:

* antipode: every monomial of ``S(T)_{ik}`` already occurs in ``T_{ik}``,
  so ``S`` maps the contracted generators into the contracted algebra;
* orthogonality: splitting every relation of ``T C T^t = C`` and
  ``T^t C T = C`` by nilpotent monomial yields no more independent
  equations than the uncontracted group has.  Monomial factors coming
  from ``q = exp(J v)`` are part of the deformation and are not split
  off.  Optionally, no relation may vanish identically.

RTT homogeneity is available as a third, report-only condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .classical import Signature, check_permutation, half, identity_perm
from .frt import (
    antipode_matrix,
    build_C_matrix,
    build_R_matrix,
    build_T_sigma,
    format_gen_entry,
    format_word_entry,
    gen_pattern,
    orthogonality_residual,
    rtt_residual,
)
from .modular import exppoly_mod, rank_mod
from .nilpotent import format_monomial, mono_indices, substitute_unit

__all__ = [
    "ContractionCandidate",
    "Verdict",
    "RULES",
    "check_antipode",
    "check_orthogonality",
    "check_rtt",
    "check_candidate",
    "canonical_sigmas",
    "segment_word",
    "j_space",
    "reference_rank",
]

RULES = ("rank", "entrywise")


def _slots_mask(slots) -> int:
    m = 0
    for k in slots:
        m |= 1 << k
    return m


@dataclass(frozen=True)
class ContractionCandidate:
    """``J`` is a set of slots; the empty set is the unit factor J = 1.

    Slots of J that are not nilpotent in ``sig`` are dropped, since a
    unit ``j_k`` contributes nothing to the product.
    """

    N: int
    sigma: tuple
    sig: Signature
    J: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_permutation(self.sigma, self.N))
        if self.sig.N != self.N:
            raise ValueError("signature size does not match N")
        J = frozenset(int(k) for k in self.J)
        if any(k < 1 or k > self.N - 1 for k in J):
            raise ValueError(f"J slot out of range 1..{self.N - 1}: {sorted(J)}")
        object.__setattr__(self, "J", J & self.sig.nil)

    @classmethod
    def make(cls, N: int, sigma=None, nil=(), J=()) -> "ContractionCandidate":
        sigma = identity_perm(N) if sigma is None else tuple(sigma)
        return cls(N, sigma, Signature(N, frozenset(nil)), frozenset(J))

    @property
    def J_mask(self) -> int:
        return _slots_mask(self.J)

    def label(self) -> str:
        J = format_monomial(self.J_mask) if self.J else "1"
        return f"N={self.N} sigma={self.sigma} j={self.sig.label()} J={J}"


@dataclass
class Verdict:
    antipode_ok: bool
    orthogonality_ok: bool
    rtt_ok: bool | None = None
    witnesses: list = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        ok = self.antipode_ok and self.orthogonality_ok
        if self.rtt_ok is not None:
            ok = ok and self.rtt_ok
        return ok


# --------------------------------------------------------------------------
# antipode


def check_antipode(c: ContractionCandidate):
    """``(ok, witnesses)``; the witness names the first offending cell."""
    T = build_T_sigma(c.N, c.sigma, c.sig)
    S = antipode_matrix(T, build_C_matrix(c.N, c.sig, c.J_mask))
    pt, ps = gen_pattern(T), gen_pattern(S)
    for pos in sorted(ps):
        extra = ps[pos] - pt.get(pos, frozenset())
        if extra:
            monos = ", ".join(format_monomial(m) for m in sorted(extra))
            return False, [("antipode", pos,
                            f"S(T) carries {monos} not present in T: "
                            f"{format_gen_entry(S[pos])}")]
    return True, []


# --------------------------------------------------------------------------
# relation systems


def _split_equations(grids, J_mask: int, words: dict):
    """Rows ``{word index: F_p value}``, one per (entry, reduced monomial)."""
    slots = mono_indices(J_mask)
    rows = []
    for grid in grids:
        for pos in sorted(grid):
            groups: dict = {}
            for w, coeff in grid[pos].items():
                if slots:
                    coeff = substitute_unit(coeff, slots)
                col = words.setdefault(w, len(words))
                for mono, poly in coeff.by_monomial().items():
                    x = exppoly_mod(poly)
                    if x:
                        groups.setdefault(mono, {})[col] = x
            rows.extend(groups.values())
    return rows


def _inhomogeneous(grids, J_mask: int, names):
    """First entry whose monomials (J factored out) differ, or None."""
    for name, grid in zip(names, grids):
        for pos in sorted(grid):
            monos = {m & ~J_mask for coeff in grid[pos].values()
                     for m in coeff.monomials()}
            if len(monos) > 1:
                return (name, pos, sorted(monos))
    return None


def _lost(grids, refs, names):
    for name, grid, ref in zip(names, grids, refs):
        for pos in sorted(ref):
            if ref[pos] and not grid.get(pos):
                return (name, pos)
    return None


@lru_cache(maxsize=None)
def _reference(N: int, kind: str):
    """Uncontracted residual grids and their rank.

    With every ``j_k = 1`` the matrix ``T_sigma`` does not depend on sigma,
    so one reference serves all permutations.
    """
    T = build_T_sigma(N, identity_perm(N), Signature(N))
    grids = _grids(kind, T, N, Signature(N), 0)
    return grids, rank_mod(_split_equations(grids, 0, {}))


def reference_rank(N: int, kind: str = "orthogonality") -> int:
    return _reference(N, kind)[1]


def _grids(kind, T, N, sig, J_mask):
    if kind == "orthogonality":
        return orthogonality_residual(T, build_C_matrix(N, sig, J_mask))
    return (rtt_residual(T, build_R_matrix(N, sig, J_mask), N),)


_NAMES = {"orthogonality": ("TCT^t", "T^tCT"), "rtt": ("RT1T2-T2T1R",)}


def _check_relations(kind, c: ContractionCandidate, forbid_lost: bool, rule: str):
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    T = build_T_sigma(c.N, c.sigma, c.sig)
    grids = _grids(kind, T, c.N, c.sig, c.J_mask)
    refs, r0 = _reference(c.N, kind)
    names = _NAMES[kind]
    witnesses = []
    first_bad = _inhomogeneous(grids, c.J_mask, names)
    if rule == "rank":
        r = rank_mod(_split_equations(grids, c.J_mask, {}))
        if r > r0:
            witnesses.append((kind, "rank",
                              f"{r} independent equations after splitting, {r0} before"))
            if first_bad:
                name, pos, monos = first_bad
                witnesses.append((kind, (name,) + pos, "splits over "
                                  + ", ".join(format_monomial(m) for m in monos)))
    elif first_bad:
        name, pos, monos = first_bad
        grid = grids[names.index(name)]
        witnesses.append((kind, (name,) + pos,
                          "not homogeneous: " + format_word_entry(grid[pos])[:400]))
    if forbid_lost and not witnesses:
        lost = _lost(grids, refs, names)
        if lost:
            witnesses.append((kind, lost, "relation vanishes identically"))
    return not witnesses, witnesses


def check_orthogonality(c: ContractionCandidate, forbid_lost: bool = True,
                        rule: str = "rank"):
    """``(ok, witnesses)`` for the (v, j)-orthogonality relations."""
    return _check_relations("orthogonality", c, forbid_lost, rule)


def check_rtt(c: ContractionCandidate, forbid_lost: bool = True, rule: str = "rank"):
    """Same test applied to the N^2 x N^2 grid ``R T1 T2 - T2 T1 R``."""
    return _check_relations("rtt", c, forbid_lost, rule)


def check_candidate(c: ContractionCandidate, with_rtt: bool = False,
                    forbid_lost: bool = True, rule: str = "rank") -> Verdict:
    a_ok, a_w = check_antipode(c)
    o_ok, o_w = check_orthogonality(c, forbid_lost, rule)
    r_ok, r_w = (None, [])
    if with_rtt:
        r_ok, r_w = check_rtt(c, forbid_lost, rule)
    return Verdict(a_ok, o_ok, r_ok, a_w + o_w + r_w)


# --------------------------------------------------------------------------
# permutations and J candidates


def segment_word(sigma, sig: Signature) -> tuple:
    """Segment index of each ``sigma_a``.

    The nilpotent slots cut ``1..N`` into segments and a bracket
    ``(mu, nu)`` is the product of the cuts between the segments of ``mu``
    and ``nu``, so ``T_sigma(j)`` depends on sigma only through this word.
    """
    return tuple(sig.segment(s) for s in sigma)


def canonical_sigmas(N: int, sig: Signature) -> list:
    """Lexicographically least sigma for every distinct segment word."""
    seen = {}
    for sigma in permutations(range(1, N + 1)):
        w = segment_word(sigma, sig)
        if w not in seen:
            seen[w] = sigma
    return sorted(seen.values())


def j_space(sig: Signature) -> list:
    """``[frozenset()]`` (J = 1) plus every nonempty set of nilpotent slots."""
    nil = sorted(sig.nil)
    out = []
    for m in range(1 << len(nil)):
        out.append(frozenset(k for b, k in enumerate(nil) if m >> b & 1))
    return sorted(out, key=lambda s: (len(s), sorted(s)))
