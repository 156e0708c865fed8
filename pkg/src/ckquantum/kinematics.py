"""Complex kinematic groups as Cayley-Klein signatures at N = 5.

Each group is identified with the nilpotent slots of its complex form;
the report reads admissibility off one N = 5 sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .checker import ContractionCandidate, check_candidate, j_space
from .classical import Signature, bracket_mask, half, prime
from .nilpotent import format_monomial
from .sweep import SweepResult, enumerate_admissible

__all__ = [
    "KinematicGroup",
    "GROUPS",
    "JRow",
    "GroupReport",
    "ChainLink",
    "ChainReport",
    "n5_sweep",
    "deformation_report",
    "primitive_element_summary",
    "chain_report",
    "confirm_witnesses",
]

N_KIN = 5


@dataclass(frozen=True)
class KinematicGroup:
    key: str
    name: str
    nil: frozenset


GROUPS = (
    KinematicGroup("E", "Euclid E(4)", frozenset({1})),
    KinematicGroup("N", "Newton N(4)", frozenset({2})),
    KinematicGroup("C", "Carroll C(4)", frozenset({4})),
    KinematicGroup("G", "Galilei G(4)", frozenset({1, 2})),
    KinematicGroup("C0", "Carroll C0(4)", frozenset({1, 4})),
)


@dataclass
class JRow:
    J: tuple
    exists: bool
    witness: tuple | None
    failing: str | None = None

    def J_label(self) -> str:
        return "1" if not self.J else "*".join(f"j{k}" for k in self.J)


@dataclass
class GroupReport:
    group: KinematicGroup
    rows: list = field(default_factory=list)

    @property
    def admissible_J(self) -> list:
        return [r.J for r in self.rows if r.exists]


@lru_cache(maxsize=2)
def n5_sweep(sigma_mode: str = "canonical") -> SweepResult:
    """The N = 5 sweep every report is projected from (computed once)."""
    return enumerate_admissible(N_KIN, sigma_mode)


def _rows_for(nil: frozenset, sweep: SweepResult) -> list:
    rows = []
    for J in j_space(Signature(N_KIN, nil)):
        Jt = tuple(sorted(J))
        sigmas = sweep.sigmas_for(nil, Jt)
        if sigmas:
            rows.append(JRow(Jt, True, sigmas[0]))
        else:
            counts = sweep.failures.get((tuple(sorted(nil)), Jt), {})
            failing = "orthogonality" if counts.get("orthogonality") else "antipode"
            rows.append(JRow(Jt, False, None, failing))
    return rows


def deformation_report(sweep: SweepResult | None = None) -> list:
    """One :class:`GroupReport` per kinematic group, every J candidate listed."""
    sweep = n5_sweep() if sweep is None else sweep
    return [GroupReport(g, _rows_for(g.nil, sweep)) for g in GROUPS]


def primitive_element_summary(c: ContractionCandidate) -> list:
    """``(k, bracket, kind)`` for the diagonal 2 x 2 blocks k = 1..n:
    ``SO(2)`` when ``(sigma_k, sigma_k')`` is 1, else ``G(1,1)``."""
    out = []
    for k in range(1, half(c.N) + 1):
        m = bracket_mask(c.sigma[k - 1], c.sigma[prime(k, c.N) - 1], c.sig)
        out.append((k, format_monomial(m), "SO(2)" if m == 0 else "G(1,1)"))
    return out


@dataclass
class ChainLink:
    source: str
    target: str
    quantizable: bool
    evidence: str


@dataclass
class ChainReport:
    links: list
    broken_at: str | None

    @property
    def verdict(self) -> str:
        return f"broken at {self.broken_at}" if self.broken_at else "quantizable"


def chain_report(report: list | None = None) -> ChainReport:
    """SO(5) -> E(4) -> G(4): each step adds one nilpotent slot."""
    report = deformation_report() if report is None else report
    by_key = {r.group.key: r for r in report}
    steps = [("SO(5)", None), ("E(4)", "E"), ("G(4)", "G")]
    links = []
    broken = None
    for (src, _), (dst, key) in zip(steps, steps[1:]):
        rows = by_key[key].rows
        good = [r for r in rows if r.exists]
        if good:
            ev = "; ".join(f"J={r.J_label()} sigma={r.witness}" for r in good)
        else:
            ev = "no J admissible: " + "; ".join(
                f"J={r.J_label()} fails {r.failing}" for r in rows)
        links.append(ChainLink(src, dst, bool(good), ev))
        if not good and broken is None:
            broken = f"{src}->{dst}"
    return ChainReport(links, broken)


def confirm_witnesses(report: list) -> bool:
    """Re-check every existing row with the exact checker."""
    for gr in report:
        for r in gr.rows:
            if r.exists:
                c = ContractionCandidate.make(N_KIN, r.witness, gr.group.nil, r.J)
                if not check_candidate(c).admissible:
                    return False
    return True
