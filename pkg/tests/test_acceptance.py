"""The eight acceptance criteria, each reporting one PASS/FAIL line."""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from ckquantum.catalog import CatalogEntry, catalog
from ckquantum.checker import ContractionCandidate, check_antipode, check_candidate, j_space
from ckquantum.classical import (
    Signature,
    Sym,
    all_perms,
    build_B_pattern,
    build_C0,
    build_Dsigma,
    identity_perm,
    verify_pattern_product,
)
from ckquantum.frt import build_R_matrix, exact_matrix, yang_baxter_residual, yang_baxter_residual_float
from ckquantum.kinematics import chain_report, confirm_witnesses, deformation_report
from ckquantum.matrix import SparseMatrix
from ckquantum.nilpotent import Pim, Q2i, extract_factor, pim_exp, substitute_unit
from ckquantum.sweep import compare_to_catalog, enumerate_admissible


@contextmanager
def criterion(record, k, title, limit=None):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        record(f"criterion {k}: FAIL  {title}  ({msg[:160]})")
        raise
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        record(f"criterion {k}: FAIL  {title}  ({dt:.1f}s > {limit}s)")
        raise AssertionError(f"criterion {k} took {dt:.1f}s, limit {limit}s")
    record(f"criterion {k}: PASS  {title}  [{dt:.1f}s]")


# -- 1. ring and property suite ----------------------------------------------

NGEN = 4


def _coef(rng):
    parts = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(4)]
    return Q2i(*parts)


def _pim(rng, nil=False, size=4):
    terms = {}
    for _ in range(rng.randint(0, size)):
        mask = rng.randint(1 if nil else 0, (1 << NGEN) - 1) << 1
        terms[(mask, rng.randint(0, 2), rng.randint(-2, 2))] = _coef(rng)
    return Pim(terms)


def _exponent(rng):
    return Pim.v(1, Fraction(rng.randint(-4, 4), 2)) + _pim(rng, nil=True, size=3)


def _case(rng, kind):
    a, b, c = _pim(rng), _pim(rng), _pim(rng)
    if kind == 0:
        return (a * b) * c == a * (b * c)
    if kind == 1:
        return a * b == b * a and a * (b + c) == a * b + a * c
    if kind == 2:
        out = Pim.scalar(1)
        for _ in range(NGEN + 1):
            out = out * _pim(rng, nil=True)
        k = rng.randint(1, NGEN)
        return not out and not Pim.iota(k) * Pim.iota(k)
    if kind == 3:
        u = Pim.scalar(_coef(rng) or Q2i.ONE) + _pim(rng, nil=True)
        return u * u.inverse() == 1
    if kind == 4:
        m = rng.randint(1, (1 << NGEN) - 1) << 1
        a = Pim({key: x for key, x in a.terms.items() if not key[0] & m})
        return extract_factor(Pim.mono(m) * a, m) == a
    if kind == 5:
        x, y = _exponent(rng), _exponent(rng)
        return pim_exp(x + y) == pim_exp(x) * pim_exp(y)
    idx = {k for k in range(1, NGEN + 1) if rng.random() < 0.5}
    return substitute_unit(a + b, idx) == substitute_unit(a, idx) + substitute_unit(b, idx)


def test_criterion_1_ring_properties(record):
    with criterion(record, 1, "1000 randomized Pimenov ring cases", limit=10):
        rng = random.Random(20240607)
        failures = [n for n in range(1000) if not _case(rng, n % 7)]
        assert failures == [], f"failing cases {failures[:10]}"


# -- 2. symplectic identity --------------------------------------------------

def test_criterion_2_symplectic_identity(record):
    with criterion(record, 2, "D_sigma^t C0 D_sigma = I for all sigma, N=2..7", limit=60):
        bad = []
        count = 0
        for N in range(2, 8):
            C0 = build_C0(N)
            I = SparseMatrix.identity(N, Pim.scalar(1))
            for sigma in all_perms(N):
                Ds = build_Dsigma(N, sigma)
                count += 1
                if not (Ds.transpose() @ C0 @ Ds - I).is_zero():
                    bad.append((N, sigma))
        assert count == sum(math.factorial(N) for N in range(2, 8))
        assert bad == []


# -- 3. Yang-Baxter ------------------------------------------------------------

def test_criterion_3_yang_baxter(record):
    with criterion(record, 3, "Yang-Baxter exact at N=3, float < 1e-12 at N=5", limit=60):
        # formal in v: zero for every q, in particular q = 13/10
        assert yang_baxter_residual(build_R_matrix(3), 3).is_zero()
        # exact numerical specialisation (exp(v/2) rational keeps q^(1/2) rational)
        R = exact_matrix(build_R_matrix(3), Fraction(13, 10))
        assert yang_baxter_residual(R, 3, Q2i.ONE).is_zero()
        assert yang_baxter_residual_float(3, 1.3) < 1e-12
        res5 = yang_baxter_residual_float(5, 1.3)
        assert res5 < 1e-12, res5


# -- 4. antipode at J = 1 ------------------------------------------------------

def test_criterion_4_antipode_at_J1(record):
    with criterion(record, 4, "pattern(S(T)) within pattern(T) at J=1, N=3,4,5"):
        bad = []
        for N in (3, 4, 5):
            for sig in Signature.all(N):
                for sigma in all_perms(N):
                    ok, w = check_antipode(ContractionCandidate(N, sigma, sig))
                    if not ok:
                        bad.append((N, sigma, sorted(sig.nil), w))
        assert bad == []


# -- 5. identical-sigma counts -------------------------------------------------

def _identity_sigma_admissible(N):
    out = set()
    sigma = identity_perm(N)
    for sig in Signature.all(N):
        if not sig.nil:
            continue
        for J in j_space(sig):
            if check_candidate(ContractionCandidate(N, sigma, sig, J)).admissible:
                out.add((tuple(sorted(sig.nil)), tuple(sorted(J))))
    return out


def _with_J(nil_sets, J):
    return {(n, tuple(sorted(set(n) & set(J)))) for n in nil_sets}


def test_criterion_5_identity_sigma_counts(record):
    with criterion(record, 5, "sigma=id: 3 contractions at N=5, 7 at N=4", limit=60):
        n5 = _identity_sigma_admissible(5)
        assert n5 == _with_J({(2,), (3,), (2, 3)}, (2, 3)), n5
        n4 = _identity_sigma_admissible(4)
        subsets = {(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)}
        assert n4 == _with_J(subsets, (1, 2, 3)), n4
        assert len(n5) == 3 and len(n4) == 7


# -- 6. theorem reproduction ---------------------------------------------------

def _diff(N, mode):
    diff = compare_to_catalog(enumerate_admissible(N, mode), N)
    assert diff.empty, f"N={N} {mode}: missing {diff.missing} extra {diff.extra}"


def test_criterion_6_small_full(record):
    with criterion(record, "6a", "empty catalog diff, N=3,4,5 full sweep", limit=300):
        for N in (3, 4, 5):
            _diff(N, "full")


def test_criterion_6_large_canonical(record):
    with criterion(record, "6b", "empty catalog diff, N=6,7 canonical sigma", limit=1800):
        for N in (6, 7):
            _diff(N, "canonical")


# -- 7. kinematics ---------------------------------------------------------------

def test_criterion_7_kinematics(record):
    with criterion(record, 7, "kinematic groups and the broken chain"):
        report = deformation_report()
        adm = {gr.group.key: gr.admissible_J for gr in report}
        assert adm == {"E": [()], "N": [(), (2,)], "C": [()], "G": [], "C0": []}, adm
        assert chain_report(report).verdict == "broken at E(4)->G(4)"
        assert confirm_witnesses(report)


# -- 8. negative controls ----------------------------------------------------------

def test_criterion_8_negative_controls(record):
    with criterion(record, 8, "corrupted pattern and injected catalog entry are caught"):
        p = build_B_pattern(3, identity_perm(3), Signature(3, {1}))
        tau = Sym(2, 3, 1)
        corrupted = p.replace((3, 1), tau, 0).replace((1, 3), tau, 0)
        assert verify_pattern_product(p)
        assert not verify_pattern_product(corrupted)

        N = 4
        res = enumerate_admissible(N)
        assert compare_to_catalog(res, N).empty
        fake = CatalogEntry(N, frozenset({1, 2, 3}), frozenset(), (1, 2, 3, 4), "injected")
        diff = compare_to_catalog(res, N, catalog(N) | {fake})
        assert [d["sources"] for d in diff.missing] == [["injected"]]
        dropped = {e for e in catalog(N) if e.key() != (frozenset({2}), frozenset())}
        assert [(d["nil"], d["J"]) for d in compare_to_catalog(res, N, dropped).extra] \
            == [([2], [])]
