"""Vectorised admissibility test used by the sweeps.

Every generator of ``T_sigma(j)`` carries one nilpotent monomial and a
fixed complex coefficient pattern ``P_g`` that does not depend on sigma or
j.  The coefficient of a word ``g h`` in any quadratic relation is then a
fixed complex vector times ``m_g m_h``, so the relation systems can be
tabulated once per N and each candidate only re-masks the table.

Words with different reduced monomials occupy disjoint columns, hence the
rank of the split system is the sum of per-monomial block ranks.  Ranks
are computed in floating point at a fixed value of ``v``; the exact
checker in :mod:`ckquantum.checker` serves as the reference.
"""

from __future__ import annotations

import math

import numpy as np

from .checker import RULES
from .classical import Signature, entry_skeleton, identity_perm, prime
from .frt import build_C_matrix, build_R_matrix, build_rho

__all__ = ["SweepKernel", "V0"]

V0 = 0.3712
_TOL = 1e-9
_PROBE = 1 << 1  # any nilpotent slot; only its presence matters


def _split(M, N2, J_probe):
    """Numeric ``(M0, MJ)`` with ``M = M0 + J * MJ`` evaluated at ``v = V0``."""
    q = math.exp(V0)
    M0 = np.zeros((N2, N2), complex)
    MJ = np.zeros((N2, N2), complex)
    for (i, k), x in M.entries.items():
        for mask, poly in x.by_monomial().items():
            val = complex(poly.evaluate(q, V0))
            if mask == 0:
                M0[i - 1, k - 1] += val
            elif mask == J_probe:
                MJ[i - 1, k - 1] += val
            else:
                raise AssertionError("unexpected monomial in deformation matrix")
    return M0, MJ


class SweepKernel:
    def __init__(self, N: int, with_rtt: bool = False, forbid_lost: bool = True,
                 rule: str = "rank"):
        if rule not in RULES:
            raise ValueError(f"unknown rule {rule!r}")
        self.N = N
        self.with_rtt = with_rtt
        self.forbid_lost = forbid_lost
        self.rule = rule
        skel = entry_skeleton(N, identity_perm(N), Signature(N))
        self.gens = sorted({s for cell in skel.values() for s, _, _ in cell})
        self.index = {g: n for n, g in enumerate(self.gens)}
        G = len(self.gens)
        P = np.zeros((G, N, N), complex)
        self.cells = {}
        for (i, k), cell in skel.items():
            self.cells[(i, k)] = [self.index[s] for s, _, _ in cell]
            for s, c, _ in cell:
                P[self.index[s], i - 1, k - 1] = complex(c)
        self.P = P
        rho = build_rho(N)
        # S(T)_{ik} carries T_{k'i'} times q^(rho_{i'} + rho_k)
        self.shift = {(i, k): rho[prime(i, N) - 1] + rho[k - 1]
                      for i in range(1, N + 1) for k in range(1, N + 1)}

        Cq, _ = _split(build_C_matrix(N), N, None)
        C0, CJ = _split(build_C_matrix(N, J=_PROBE), N, _PROBE)
        self.orth = {
            "q": self._orth_table(Cq),
            "0": self._orth_table(C0),
            "J": self._orth_table(CJ),
        }
        self.orth_const = {"q": -np.concatenate([Cq.ravel()] * 2),
                           "J": -np.concatenate([(C0 + CJ).ravel()] * 2)}
        self.orth_ref = self._reference(self.orth["q"], self.orth_const["q"])
        if with_rtt:
            Rq, _ = _split(build_R_matrix(N), N * N, None)
            R0, RJ = _split(build_R_matrix(N, J=_PROBE), N * N, _PROBE)
            self.rtt = {"q": self._rtt_table(Rq), "0": self._rtt_table(R0),
                        "J": self._rtt_table(RJ)}
            zero = np.zeros(N ** 4, complex)
            self.rtt_const = {"q": zero, "J": zero}
            self.rtt_ref = self._reference(self.rtt["q"], zero)

    # tables -----------------------------------------------------------------
    def _orth_table(self, C):
        P = self.P
        first = np.einsum("gia,ab,hkb->ghik", P, C, P, optimize=True)
        second = np.einsum("gai,ab,hbk->ghik", P, C, P, optimize=True)
        G, N = len(self.gens), self.N
        return np.concatenate([first.reshape(G, G, N * N),
                               second.reshape(G, G, N * N)], axis=2)

    def _rtt_table(self, R):
        N, P = self.N, self.P
        R4 = R.reshape(N, N, N, N)
        left = np.einsum("ikab,gaj,hbl->ghikjl", R4, P, P, optimize=True)
        right = np.einsum("hia,gkb,abjl->ghikjl", P, P, R4, optimize=True)
        G = len(self.gens)
        return (left - right).reshape(G, G, N ** 4)

    def _reference(self, table, const):
        G = len(self.gens)
        flat = table.reshape(G * G, -1)
        block = np.vstack([flat, const[None, :]])
        nonzero = (np.abs(block) > _TOL).any(axis=0)
        return np.linalg.matrix_rank(block), nonzero

    # per candidate ------------------------------------------------------------
    def masks(self, sigma, sig: Signature) -> np.ndarray:
        m = np.zeros(len(self.gens), np.int64)
        for cell in entry_skeleton(self.N, sigma, sig).values():
            for s, _, mask in cell:
                m[self.index[s]] = mask
        return m

    def antipode_ok(self, m, J: int) -> bool:
        N = self.N
        for (i, k), gens in self.cells.items():
            have = {int(m[g]) for g in gens}
            src = self.cells.get((prime(k, N), prime(i, N)), ())
            shift = J and self.shift[(i, k)]
            for g in src:
                mg = int(m[g])
                if mg not in have:
                    return False
                if shift and not mg & J and (mg | J) not in have:
                    return False
        return True

    def _relations_ok(self, tables, const, ref, m, J: int) -> bool:
        r0, ref_nonzero = ref
        pair_or = m[:, None] | m[None, :]
        valid = (m[:, None] & m[None, :]) == 0
        if J:
            withJ = ((pair_or & J) == 0)[..., None]
            W = tables["0"] + tables["J"] * withJ
            keys = pair_or & ~J
            c = const["J"]
        else:
            W = tables["q"]
            keys = pair_or
            c = const["q"]
        cols = W[valid]
        ckeys = keys[valid]
        nz = np.abs(cols) > _TOL
        c_nz = np.abs(c) > _TOL
        if self.rule == "entrywise":
            big = np.iinfo(np.int64).max
            kk = np.broadcast_to(ckeys[:, None], nz.shape)
            kmin = np.where(nz, kk, big).min(axis=0, initial=big)
            kmax = np.where(nz, kk, -1).max(axis=0, initial=-1)
            kmin = np.where(c_nz, np.minimum(kmin, 0), kmin)
            kmax = np.where(c_nz, np.maximum(kmax, 0), kmax)
            if ((kmax >= 0) & (kmin != kmax)).any():
                return False
        else:
            order = np.argsort(ckeys, kind="stable")
            ckeys_s = ckeys[order]
            cols_s = cols[order]
            bounds = np.flatnonzero(np.diff(ckeys_s)) + 1
            starts = np.concatenate([[0], bounds])
            ends = np.concatenate([bounds, [len(ckeys_s)]])
            total = 0
            for s, e in zip(starts, ends):
                block = cols_s[s:e]
                if ckeys_s[s] == 0 and c_nz.any():
                    block = np.vstack([block, c[None, :]])
                total += np.linalg.matrix_rank(block)
                if total > r0:
                    return False
            if len(ckeys_s) == 0 or ckeys_s[0] != 0:
                total += int(c_nz.any())
                if total > r0:
                    return False
        if self.forbid_lost:
            present = nz.any(axis=0) | c_nz
            if (ref_nonzero & ~present).any():
                return False
        return True

    def orthogonality_ok(self, m, J: int) -> bool:
        return self._relations_ok(self.orth, self.orth_const, self.orth_ref, m, J)

    def rtt_ok(self, m, J: int) -> bool:
        return self._relations_ok(self.rtt, self.rtt_const, self.rtt_ref, m, J)

    def evaluate(self, sigma, sig: Signature, J: int, m=None):
        """``(antipode_ok, orthogonality_ok, rtt_ok or None)``.

        Orthogonality and RTT are skipped (reported False) once the
        antipode fails, mirroring the order of the sweep.
        """
        if m is None:
            m = self.masks(sigma, sig)
        a = self.antipode_ok(m, J)
        if not a:
            return False, False, (False if self.with_rtt else None)
        o = self.orthogonality_ok(m, J)
        r = self.rtt_ok(m, J) if self.with_rtt else None
        return a, o, r
