"""Quantum orthogonal Cayley-Klein data in the FRT picture.

The deformation parameter is ``q = exp(z)`` with ``z = J v``: ``v`` is a
formal symbol and ``J`` a (possibly empty) product of nilpotent slots,
passed around as a monomial mask.  ``J = 0`` is the unit factor.

Generator matrices are dictionaries ``(i, k) -> {Sym: Pim}``; products of
generators live in the free algebra and are stored as
``{word: Pim}`` with ``word`` a tuple of :class:`~ckquantum.classical.Sym`
(never reordered).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .classical import Signature, Sym, entry_skeleton, half, prime, QUANTUM
from .matrix import SparseMatrix
from .nilpotent import Pim, Q2i, format_monomial, pim_exp

__all__ = [
    "build_rho",
    "q_power",
    "build_C_matrix",
    "build_R_matrix",
    "build_T_sigma",
    "antipode_matrix",
    "counit_values",
    "apply_counit",
    "orthogonality_residual",
    "rtt_residual",
    "gen_pattern",
    "format_gen_entry",
    "format_word_entry",
    "swap_matrix",
    "yang_baxter_residual",
    "numeric_matrix",
    "yang_baxter_residual_float",
    "exact_matrix",
]


def build_rho(N: int) -> tuple[Fraction, ...]:
    """``rho_1 .. rho_N``: ``N/2 - i`` (odd N) or ``n - i`` (even N) for
    ``i <= n``, a zero in the middle for odd N, and ``rho_{k'} = -rho_k``."""
    if N < 3:
        raise ValueError("N >= 3 required")
    n = half(N)
    if N % 2:
        top = [Fraction(N, 2) - i for i in range(1, n + 1)]
        mid = [Fraction(0)]
    else:
        top = [Fraction(n - i) for i in range(1, n + 1)]
        mid = []
    return tuple(top + mid + [-x for x in reversed(top)])


def q_power(x, J: int) -> Pim:
    """``q**x = exp(x * J * v)``; with nilpotent ``J`` this is ``1 + x J v``."""
    x = Fraction(x)
    if not x:
        return Pim.scalar(1)
    return pim_exp(Pim._raw({(J, 1, 0): Q2i(x)}))


def build_C_matrix(N: int, sig: Signature | None = None, J: int = 0) -> SparseMatrix:
    """Anti-diagonal ``C = C0 q^rho``: entry ``(i, i')`` is ``q**rho_{i'}``.

    ``C`` is its own inverse and reduces to ``C0`` when exponentials drop.
    """
    rho = build_rho(N)
    return SparseMatrix(N, N, {(i, prime(i, N)): q_power(rho[prime(i, N) - 1], J)
                               for i in range(1, N + 1)})


def build_R_matrix(N: int, sig: Signature | None = None, J: int = 0) -> SparseMatrix:
    """FRT R-matrix of SO_q(N) with ``q -> exp(J v)``, size ``N^2 x N^2``.

    Basis vector ``e_i (x) e_k`` has index ``(i - 1) N + k``.
    """
    rho = build_rho(N)
    q = q_power(1, J)
    qi = q_power(-1, J)
    dq = q - qi

    def idx(i, k):
        return (i - 1) * N + k

    entries: dict = {}

    def add(r, c, val):
        prev = entries.get((r, c))
        entries[(r, c)] = val if prev is None else prev + val

    for i in range(1, N + 1):
        ip = prime(i, N)
        for j in range(1, N + 1):
            if i == j:
                add(idx(i, i), idx(i, i), q if i != ip else Pim.scalar(1))
            elif j != ip:
                add(idx(i, j), idx(i, j), Pim.scalar(1))
            else:
                add(idx(i, j), idx(i, j), qi)
    for i in range(1, N + 1):
        for j in range(1, i):
            add(idx(i, j), idx(j, i), dq)
            w = dq * q_power(rho[i - 1] - rho[j - 1], J)
            add(idx(i, prime(i, N)), idx(j, prime(j, N)), -w)
    return SparseMatrix(N * N, N * N, entries)


def build_T_sigma(N: int, sigma, sig: Signature) -> dict:
    """``T_sigma(j)``: cell -> ``{Sym: coefficient}``."""
    out = {}
    for pos, entries in entry_skeleton(N, sigma, sig).items():
        out[pos] = {s: Pim.mono(m, c) for s, c, m in entries}
    return out


def gen_pattern(G: dict) -> dict:
    """Cell -> set of monomials present (generator-agnostic)."""
    return {pos: frozenset(m for c in cell.values() for m in c.monomials())
            for pos, cell in G.items() if cell}


def _scaled(cell: dict, c: Pim) -> dict:
    out = {}
    for g, x in cell.items():
        y = x * c
        if y:
            out[g] = y
    return out


def _accumulate(acc: dict, part: dict):
    for g, x in part.items():
        prev = acc.get(g)
        if prev is None:
            acc[g] = x
        else:
            s = prev + x
            if s:
                acc[g] = s
            else:
                del acc[g]


def antipode_matrix(T: dict, C: SparseMatrix) -> dict:
    """``S(T) = C T^t C^{-1}``; entries stay linear in the generators."""
    N = C.rows
    Cinv = _anti_diagonal_inverse(C)
    out = {}
    for i in range(1, N + 1):
        for k in range(1, N + 1):
            acc: dict = {}
            for (r, a), c1 in C.entries.items():
                if r != i:
                    continue
                for (b, col), c2 in Cinv.entries.items():
                    if col != k:
                        continue
                    # (C T^t C^-1)_{ik} = C_ia T_ba Cinv_bk
                    cell = T.get((b, a))
                    if cell:
                        _accumulate(acc, _scaled(cell, c1 * c2))
            if acc:
                out[(i, k)] = acc
    return out


def _anti_diagonal_inverse(C: SparseMatrix) -> SparseMatrix:
    N = C.rows
    out = {}
    for (i, j), x in C.entries.items():
        if j != prime(i, N):
            raise ValueError("C must be anti-diagonal")
        out[(j, i)] = x.inverse()
    return SparseMatrix(N, N, out)


def counit_values(N: int) -> dict:
    """epsilon on generators: 1 on ``t[k,k]`` (and the middle one), else 0."""
    n = half(N)
    out = {}
    for pos, entries in entry_skeleton(N, tuple(range(1, N + 1)),
                                       Signature(N)).items():
        for s, _, _ in entries:
            out[s] = 1 if (s.kind == 0 and s.i == s.k and s.i <= n + 1) else 0
    return out


def apply_counit(T: dict, N: int) -> SparseMatrix:
    eps = counit_values(N)
    out = {}
    for pos, cell in T.items():
        total = Pim()
        for g, c in cell.items():
            if eps[g]:
                total = total + c * eps[g]
        out[pos] = total
    return SparseMatrix(N, N, out)


# --------------------------------------------------------------------------
# quadratic relations in the free algebra


def _mul_cells(left: dict, mid: Pim, right: dict, acc: dict):
    for g, x in left.items():
        xm = x * mid
        if not xm:
            continue
        for h, y in right.items():
            c = xm * y
            if not c:
                continue
            w = (g, h)
            prev = acc.get(w)
            if prev is None:
                acc[w] = c
            else:
                s = prev + c
                if s:
                    acc[w] = s
                else:
                    del acc[w]


def orthogonality_residual(T: dict, C: SparseMatrix) -> tuple[dict, dict]:
    """Entries of ``T C T^t - C`` and ``T^t C T - C`` as ``{word: Pim}``.

    The empty word ``()`` holds the constant (``-C``) part.
    """
    N = C.rows
    first, second = {}, {}
    for i in range(1, N + 1):
        for k in range(1, N + 1):
            acc1: dict = {}
            acc2: dict = {}
            for (a, b), c in C.entries.items():
                # (T C T^t)_{ik} = T_ia C_ab T_kb ; (T^t C T)_{ik} = T_ai C_ab T_bk
                _mul_cells(T.get((i, a), {}), c, T.get((k, b), {}), acc1)
                _mul_cells(T.get((a, i), {}), c, T.get((b, k), {}), acc2)
            ck = C.entries.get((i, k))
            if ck:
                for acc in (acc1, acc2):
                    prev = acc.get(())
                    s = -ck if prev is None else prev - ck
                    if s:
                        acc[()] = s
                    else:
                        acc.pop((), None)
            first[(i, k)] = acc1
            second[(i, k)] = acc2
    return first, second


def rtt_residual(T: dict, R: SparseMatrix, N: int) -> dict:
    """Entries of ``R T1 T2 - T2 T1 R`` indexed by ``((i,k),(j,l))``.

    ``(T1 T2)_{(i,k),(j,l)} = T_ij T_kl`` and
    ``(T2 T1)_{(i,k),(j,l)} = T_kl T_ij``.
    """
    def split(x):
        return (x - 1) // N + 1, (x - 1) % N + 1

    rows: dict = {}
    cols: dict = {}
    for (r, c), x in R.entries.items():
        rows.setdefault(r, []).append((c, x))
        cols.setdefault(c, []).append((r, x))
    out = {}
    one = Pim.scalar(1)
    for r in range(1, N * N + 1):
        for c in range(1, N * N + 1):
            acc: dict = {}
            j, l = split(c)
            for m, x in rows.get(r, ()):
                a, b = split(m)
                _mul_cells(T.get((a, j), {}), x, T.get((b, l), {}), acc)
            i, k = split(r)
            for m, x in cols.get(c, ()):
                a, b = split(m)
                _mul_cells(T.get((k, b), {}), -x, T.get((i, a), {}), acc)
            if acc:
                out[(r, c)] = acc
    return out


def format_gen_entry(cell: dict, names=QUANTUM) -> str:
    if not cell:
        return "0"
    return " + ".join(f"({c})*{g.name(names)}" for g, c in sorted(cell.items()))


def format_word_entry(entry: dict, names=QUANTUM) -> str:
    if not entry:
        return "0"
    parts = []
    for w, c in sorted(entry.items(), key=lambda t: (len(t[0]), t[0])):
        word = "*".join(g.name(names) for g in w) or "1"
        parts.append(f"({c})*{word}")
    return " + ".join(parts)


# --------------------------------------------------------------------------
# Yang-Baxter


def swap_matrix(N: int, one) -> SparseMatrix:
    """``P (e_i (x) e_k) = e_k (x) e_i``."""
    return SparseMatrix(N * N, N * N, {((i - 1) * N + k, (k - 1) * N + i): one
                                       for i in range(1, N + 1)
                                       for k in range(1, N + 1)})


def exact_matrix(M: SparseMatrix, half) -> SparseMatrix:
    """Exact image over Q(i, sqrt2) with ``exp(v/2) = half`` (rational);
    entries must be free of ``v`` powers and nilpotents."""
    half = Fraction(half)
    out = {}
    for pos, x in M.entries.items():
        total = Q2i.ZERO
        for (mask, m, e2), c in x.terms.items():
            if mask or m:
                raise ValueError("entry depends on v or on nilpotents")
            total = total + c * half ** e2
        out[pos] = total
    return SparseMatrix(M.rows, M.cols, out)


def yang_baxter_residual(R: SparseMatrix, N: int, one=None) -> SparseMatrix:
    """``R12 R13 R23 - R23 R13 R12`` computed exactly over R's entry ring."""
    one = Pim.scalar(1) if one is None else one
    eye = SparseMatrix.identity(N, one)
    R12 = R.kron(eye)
    R23 = eye.kron(R)
    P23 = eye.kron(swap_matrix(N, one))
    R13 = P23 @ R12 @ P23
    return R12 @ R13 @ R23 - R23 @ R13 @ R12


def numeric_matrix(M: SparseMatrix, q: float, v: float | None = None) -> np.ndarray:
    """Float image of a matrix over D(iota)[v, e^v]: nilpotent parts are
    dropped, ``exp(v) = q``."""
    import math
    v = math.log(q) if v is None else v
    out = np.zeros((M.rows, M.cols), complex)
    for (i, k), x in M.entries.items():
        out[i - 1, k - 1] = complex(x.constant_part().evaluate(float(q), v))
    return out


def yang_baxter_residual_float(N: int, q: float) -> float:
    R = numeric_matrix(build_R_matrix(N), q)
    eye = np.eye(N)
    P = np.zeros((N * N, N * N))
    for i in range(N):
        for k in range(N):
            P[i * N + k, k * N + i] = 1
    R12 = np.kron(R, eye)
    R23 = np.kron(eye, R)
    P23 = np.kron(eye, P)
    R13 = P23 @ R12 @ P23
    return float(np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12).max())
