"""Classical Cayley-Klein data: signatures, brackets, the matrices C0, D,
D_sigma and the placement of nilpotent factors in B_sigma(j).

Rows and columns are numbered ``1..N``; ``k' = N + 1 - k`` pairs index
``k`` with its mirror.  For ``N = 2n + 1`` the middle index ``n + 1`` is
self-paired.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator

import numpy as np
from scipy.linalg import expm

from .matrix import SparseMatrix
from .nilpotent import Pim, Q2i, format_monomial

__all__ = [
    "Signature",
    "Sym",
    "CLASSICAL",
    "QUANTUM",
    "PatternMatrix",
    "prime",
    "half",
    "check_permutation",
    "identity_perm",
    "all_perms",
    "bracket",
    "bracket_mask",
    "build_C0",
    "build_D",
    "build_V",
    "build_Dsigma",
    "entry_skeleton",
    "build_B_pattern",
    "verify_pattern_product",
    "pattern_product",
    "to_complex",
    "companion_orthogonality_residual",
]


def prime(k: int, N: int) -> int:
    return N + 1 - k


def half(N: int) -> int:
    """``n`` with ``N = 2n`` or ``N = 2n + 1``."""
    return N // 2


def check_permutation(sigma: Iterable[int], N: int | None = None) -> tuple[int, ...]:
    sigma = tuple(int(x) for x in sigma)
    if N is None:
        N = len(sigma)
    if len(sigma) != N or sorted(sigma) != list(range(1, N + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{N}")
    return sigma


def identity_perm(N: int) -> tuple[int, ...]:
    return tuple(range(1, N + 1))


def all_perms(N: int) -> Iterator[tuple[int, ...]]:
    return permutations(range(1, N + 1))


@dataclass(frozen=True, order=True)
class Signature:
    """Cayley-Klein parameters ``j = (j_1, ..., j_{N-1})``.

    ``nil`` is the set of slots that take the nilpotent value ``iota_k``;
    every other slot equals 1.
    """

    N: int
    nil: frozenset = frozenset()

    def __post_init__(self):
        nil = frozenset(int(k) for k in self.nil)
        if any(k < 1 or k > self.N - 1 for k in nil):
            raise ValueError(f"slot out of range 1..{self.N - 1}: {sorted(nil)}")
        object.__setattr__(self, "nil", nil)

    @classmethod
    def from_mask(cls, N: int, mask: int) -> "Signature":
        return cls(N, frozenset(k for k in range(1, N) if mask >> k & 1))

    @classmethod
    def all(cls, N: int) -> list["Signature"]:
        return [cls.from_mask(N, m << 1) for m in range(2 ** (N - 1))]

    @property
    def mask(self) -> int:
        m = 0
        for k in self.nil:
            m |= 1 << k
        return m

    def prefix(self, a: int) -> int:
        """Mask of nilpotent slots strictly left of point ``a``."""
        return self.mask & ((1 << a) - 1)

    def segment(self, a: int) -> int:
        """Number of nilpotent slots left of ``a``; equal values = bracket 1."""
        return bin(self.prefix(a)).count("1")

    def label(self) -> str:
        return "(" + ",".join(f"i{k}" if k in self.nil else "1"
                              for k in range(1, self.N)) + ")"


def bracket_mask(mu: int, nu: int, sig: Signature) -> int:
    """``(mu, nu) = j_min ... j_{max-1}`` as a monomial mask; ``(mu, mu) = 1``."""
    lo, hi = (mu, nu) if mu <= nu else (nu, mu)
    window = ((1 << hi) - 1) & ~((1 << lo) - 1)
    return sig.mask & window


def bracket(mu: int, nu: int, sig: Signature) -> Pim:
    if not (1 <= mu <= sig.N and 1 <= nu <= sig.N):
        raise ValueError(f"indices must lie in 1..{sig.N}")
    return Pim.mono(bracket_mask(mu, nu, sig))


# --------------------------------------------------------------------------
# constant matrices

_INV_SQRT2 = Q2i(0, "1/2")


def build_C0(N: int) -> SparseMatrix:
    if N < 2:
        raise ValueError("N >= 2 required")
    return SparseMatrix(N, N, {(i, prime(i, N)): Pim.scalar(1)
                               for i in range(1, N + 1)})


def build_D(N: int) -> SparseMatrix:
    """The symplectic-basis change: rows ``(e_k - i e_k')/sqrt2`` and
    ``(e_k + i e_k')/sqrt2``; the middle row is ``e_{n+1}`` for odd N."""
    if N < 2:
        raise ValueError("N >= 2 required")
    n = half(N)
    h = _INV_SQRT2
    entries = {}
    for k in range(1, n + 1):
        kp = prime(k, N)
        entries[(k, k)] = Pim.scalar(h)
        entries[(k, kp)] = Pim.scalar(h * -Q2i.I)
        entries[(kp, k)] = Pim.scalar(h)
        entries[(kp, kp)] = Pim.scalar(h * Q2i.I)
    if N % 2:
        entries[(n + 1, n + 1)] = Pim.scalar(1)
    return SparseMatrix(N, N, entries)


def build_V(sigma) -> SparseMatrix:
    """Permutation matrix with ``V[i, k] = 1`` iff ``sigma_i = k``."""
    sigma = check_permutation(sigma)
    N = len(sigma)
    return SparseMatrix(N, N, {(i, s): Pim.scalar(1)
                               for i, s in enumerate(sigma, start=1)})


def build_Dsigma(N: int, sigma) -> SparseMatrix:
    sigma = check_permutation(sigma, N)
    return build_D(N) @ build_V(sigma)


# --------------------------------------------------------------------------
# entry structure of B_sigma(j)


@dataclass(frozen=True, order=True)
class Sym:
    """Abstract entry symbol: ``kind`` 0..3 stands for b, b', b~, b~'
    (classical) or t, t', tau, tau' (quantum); ``i, k`` is its index pair."""

    kind: int
    i: int
    k: int

    def name(self, names=None) -> str:
        names = names or QUANTUM
        return f"{names[self.kind]}[{self.i},{self.k}]"

    def __str__(self):
        return self.name()


CLASSICAL = ("b", "b'", "b~", "b~'")
QUANTUM = ("t", "t'", "tau", "tau'")

_I = Q2i.I
_MI = -Q2i.I
_ONE = Q2i.ONE
_MONE = -Q2i.ONE


def entry_skeleton(N: int, sigma, sig: Signature) -> dict:
    """Cell ``(i, k)`` -> list of ``(Sym, coefficient, monomial mask)``.

    This is the table of matrix elements of ``B_sigma(j)``; the same table
    with quantum names gives ``T_sigma(j)``.  Generic cells ``(k, p)`` are
    taken for ``1 <= k != p <= n``.
    """
    sigma = check_permutation(sigma, N)
    if sig.N != N:
        raise ValueError("signature size does not match N")
    n = half(N)
    odd = N % 2 == 1
    mid = n + 1
    s = (None,) + sigma

    def br(a, b):
        return bracket_mask(s[a], s[b], sig)

    cells: dict = {}
    if odd:
        cells[(mid, mid)] = [(Sym(0, mid, mid), _ONE, 0)]
    for k in range(1, n + 1):
        kp = prime(k, N)
        bkk = br(k, kp)
        d, a = Sym(0, k, k), Sym(2, k, k)
        cells[(k, k)] = [(d, _ONE, 0), (a, _I, bkk)]
        cells[(kp, kp)] = [(d, _ONE, 0), (a, _MI, bkk)]
        d, a = Sym(0, kp, k), Sym(2, kp, k)
        cells[(k, kp)] = [(d, _ONE, 0), (a, _MI, bkk)]
        cells[(kp, k)] = [(d, _ONE, 0), (a, _I, bkk)]
        if odd:
            lo, hi = br(k, mid), br(mid, kp)
            d, a = Sym(0, k, mid), Sym(2, k, mid)
            cells[(k, mid)] = [(d, _ONE, lo), (a, _MI, hi)]
            cells[(kp, mid)] = [(d, _ONE, lo), (a, _I, hi)]
            d, a = Sym(0, mid, k), Sym(2, mid, k)
            cells[(mid, k)] = [(d, _ONE, lo), (a, _I, hi)]
            cells[(mid, kp)] = [(d, _ONE, lo), (a, _MI, hi)]
    for k in range(1, n + 1):
        kp = prime(k, N)
        for p in range(1, n + 1):
            if p == k:
                continue
            pp = prime(p, N)
            m_t, m_tp = br(k, p), br(kp, pp)
            m_u, m_up = br(k, pp), br(kp, p)
            t, tp, u, up = (Sym(0, k, p), Sym(1, k, p),
                            Sym(2, k, p), Sym(3, k, p))
            cells[(k, p)] = [(t, _ONE, m_t), (tp, _ONE, m_tp),
                             (u, _I, m_u), (up, _MI, m_up)]
            cells[(k, pp)] = [(t, _ONE, m_t), (tp, _MONE, m_tp),
                              (u, _MI, m_u), (up, _MI, m_up)]
            cells[(kp, p)] = [(t, _ONE, m_t), (tp, _MONE, m_tp),
                              (u, _I, m_u), (up, _I, m_up)]
            cells[(kp, pp)] = [(t, _ONE, m_t), (tp, _ONE, m_tp),
                               (u, _MI, m_u), (up, _I, m_up)]
    return cells


@dataclass(frozen=True)
class PatternMatrix:
    """Per cell, the set of ``(Sym, mask)`` pairs: which symbol carries
    which nilpotent monomial.  ``coeffs`` maps ``(cell, Sym)`` to the
    numerical coefficient of that symbol."""

    N: int
    cells: dict
    names: tuple = QUANTUM
    coeffs: dict | None = None

    def cell(self, i: int, k: int) -> frozenset:
        return self.cells.get((i, k), frozenset())

    def masks(self, i: int, k: int) -> frozenset:
        return frozenset(m for _, m in self.cell(i, k))

    def coeff(self, pos, s: Sym) -> Q2i:
        return _ONE if self.coeffs is None else self.coeffs[(pos, s)]

    def replace(self, pos, s: Sym, mask: int) -> "PatternMatrix":
        """Copy with the monomial of ``s`` in cell ``pos`` set to ``mask``."""
        cell = frozenset((t, mask if t == s else m) for t, m in self.cell(*pos))
        return PatternMatrix(self.N, {**self.cells, pos: cell}, self.names, self.coeffs)

    def __str__(self):
        rows = []
        for i in range(1, self.N + 1):
            row = []
            for k in range(1, self.N + 1):
                row.append(" + ".join(
                    f"{s.name(self.names)}*{format_monomial(m)}"
                    for s, m in sorted(self.cell(i, k))))
            rows.append(" | ".join(row))
        return "\n".join(rows)


def build_B_pattern(N: int, sigma, sig: Signature, symbols: str = "classical") -> PatternMatrix:
    names = {"classical": CLASSICAL, "quantum": QUANTUM}[symbols]
    skel = entry_skeleton(N, sigma, sig)
    cells = {pos: frozenset((s, m) for s, _, m in entries)
             for pos, entries in skel.items()}
    coeffs = {(pos, s): c for pos, entries in skel.items() for s, c, _ in entries}
    return PatternMatrix(N, cells, names, coeffs)


def pattern_product(p: PatternMatrix) -> dict:
    """Cell -> set of monomials in the formal product ``p(1) . p(2)`` of two
    independent copies of the symbols.

    Terms are collected per ``(left symbol, right symbol, monomial)`` with
    their exact coefficients, so contributions that cancel do not count.
    """
    N = p.N
    out = {}
    for i in range(1, N + 1):
        for k in range(1, N + 1):
            acc: dict = {}
            for a in range(1, N + 1):
                for s1, m1 in p.cell(i, a):
                    c1 = p.coeff((i, a), s1)
                    for s2, m2 in p.cell(a, k):
                        if m1 & m2:
                            continue
                        key = (s1, s2, m1 | m2)
                        acc[key] = acc.get(key, Q2i.ZERO) + c1 * p.coeff((a, k), s2)
            out[(i, k)] = {m for (_, _, m), c in acc.items() if c}
    return out


def verify_pattern_product(p: PatternMatrix) -> bool:
    """True iff every monomial of ``p . p`` already occurs in the same cell
    of ``p`` -- the closure that keeps the coproduct consistent."""
    prod = pattern_product(p)
    return all(ms <= p.masks(*pos) for pos, ms in prod.items())


# --------------------------------------------------------------------------
# floating-point companion check


def to_complex(M: SparseMatrix) -> np.ndarray:
    out = np.zeros((M.rows, M.cols), complex)
    for (i, k), x in M.entries.items():
        out[i - 1, k - 1] = complex(x.constant_part().evaluate(1.0, 0.0))
    return out


def companion_orthogonality_residual(N: int, sigma, rng: np.random.Generator) -> float:
    """``max |B^t C0 B - C0|`` for ``B = D_sigma A D_sigma^-1`` with a random
    complex orthogonal ``A = expm(X)``, ``X = -X^t``."""
    X = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    A = expm((X - X.T) / 2)
    Ds = to_complex(build_Dsigma(N, sigma))
    C0 = to_complex(build_C0(N))
    B = Ds @ A @ np.linalg.inv(Ds)
    return float(np.abs(B.T @ C0 @ B - C0).max())
