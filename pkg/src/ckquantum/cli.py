"""Command-line front end: ``check``, ``sweep``, ``kinematics``, ``catalog``.

Exit codes: 0 admissible (or empty catalog diff), 1 inadmissible (or a
nonempty diff), 2 invalid input, 3 sweep budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass, field

from .catalog import catalog
from .checker import RULES, ContractionCandidate, check_candidate
from .classical import identity_perm
from .kinematics import chain_report, deformation_report, primitive_element_summary
from .sweep import (
    SIGMA_MODES,
    WORKERS_ENV,
    BudgetExceeded,
    compare_to_catalog,
    default_workers,
    enumerate_admissible,
)

__all__ = ["InvalidInput", "Report", "parse_sigma", "parse_slots", "build_parser", "main"]

N_MIN, N_MAX = 3, 7
DEFAULT_BUDGET = 10_000_000

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InvalidInput(ValueError):
    """Malformed option value; ``offset`` points at the offending token."""

    def __init__(self, flag: str, text: str, offset: int, reason: str):
        super().__init__(f"{flag}: {reason}")
        self.flag = flag
        self.text = text
        self.offset = offset
        self.reason = reason

    def render(self) -> str:
        head = f"error: {self.flag} {self.text}"
        pad = " " * (len("error: ") + len(self.flag) + 1 + self.offset)
        return f"{head}\n{pad}^ {self.reason}"


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"[^\s,()]+")


def _int_tokens(flag, text):
    out = []
    for m in _TOKEN.finditer(text):
        try:
            out.append((int(m.group()), m.start()))
        except ValueError:
            raise InvalidInput(flag, text, m.start(), f"not an integer: {m.group()!r}") from None
    return out


def _parse_cycles(text, N):
    flag = "--sigma"
    if re.search(r"[^\d\s,()]", text) or text.count("(") != text.count(")"):
        bad = re.search(r"[^\d\s,()]", text)
        pos = bad.start() if bad else text.rfind("(")
        raise InvalidInput(flag, text, pos, "malformed cycle notation")
    image = list(range(N + 1))
    seen = set()
    for cyc in re.finditer(r"\(([^()]*)\)", text):
        toks = [(v, p + cyc.start(1)) for v, p in _int_tokens(flag, cyc.group(1))]
        for v, p in toks:
            if not 1 <= v <= N:
                raise InvalidInput(flag, text, p, f"value out of range 1..{N}")
            if v in seen:
                raise InvalidInput(flag, text, p, f"{v} appears twice")
            seen.add(v)
        for (a, _), (b, _) in zip(toks, toks[1:] + toks[:1]):
            image[a] = b
    return tuple(image[1:])


def parse_sigma(text: str, N: int) -> tuple:
    """``id``, one-line notation ``1,4,3,5,2`` or cycles ``(2 4)(3 5)``."""
    flag = "--sigma"
    text = text.strip()
    if text == "id":
        return identity_perm(N)
    if "(" in text or ")" in text:
        return _parse_cycles(text, N)
    toks = _int_tokens(flag, text)
    seen = set()
    for v, p in toks:
        if not 1 <= v <= N:
            raise InvalidInput(flag, text, p, f"value out of range 1..{N}")
        if v in seen:
            raise InvalidInput(flag, text, p, f"{v} appears twice")
        seen.add(v)
    if len(toks) != N:
        raise InvalidInput(flag, text, len(text), f"expected {N} values, got {len(toks)}")
    return tuple(v for v, _ in toks)


def parse_slots(text: str, N: int, flag: str = "--j") -> frozenset:
    """Slot list ``2,3``.  ``none`` or an empty string is the all-unit
    assignment; for ``--J`` the value ``1`` is the unit factor.  ``--j``
    also takes a bitmask ``0b110`` / ``0x6`` with bit k standing for slot k.
    """
    text = text.strip()
    if text in ("", "none") or (flag == "--J" and text == "1"):
        return frozenset()
    if flag == "--j" and re.fullmatch(r"0[bBxX][0-9a-fA-F]+", text):
        mask = int(text, 0)
        if mask & 1 or mask >> N:
            raise InvalidInput(flag, text, 0, f"bitmask must only use bits 1..{N - 1}")
        return frozenset(k for k in range(1, N) if mask >> k & 1)
    out = set()
    for v, p in _int_tokens(flag, text):
        if not 1 <= v <= N - 1:
            raise InvalidInput(flag, text, p, f"slot out of range 1..{N - 1}")
        if v in out:
            raise InvalidInput(flag, text, p, f"slot {v} appears twice")
        out.add(v)
    return frozenset(out)


def _check_N(N):
    if not N_MIN <= N <= N_MAX:
        raise InvalidInput("--n", str(N), 0, f"N must lie in {N_MIN}..{N_MAX}")


# --------------------------------------------------------------------------
# reports


def _plain(x):
    """Tuples and sets to sorted / ordered lists so JSON round-trips."""
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(y) for y in x)
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


@dataclass
class Report:
    config: dict
    verdicts: list = field(default_factory=list)
    catalog_diff: dict | None = None
    sections: dict = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        data.update(data.pop("sections"))
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        core = {k: data.pop(k) for k in ("config", "verdicts", "catalog_diff")}
        return cls(**core, sections=data)


def _verdict_row(nil, J, sigma, antipode, orth, rtt, witnesses=()):
    return {"j": sorted(nil), "J": sorted(J), "sigma": list(sigma),
            "antipode": antipode, "orthogonality": orth, "rtt": rtt,
            "witnesses": _plain(list(witnesses))}


def _J_text(J):
    return "1" if not J else "*".join(f"j{k}" for k in J)


def _j_text(nil):
    return "{" + ",".join(map(str, nil)) + "}"


def _config(args, **kw) -> dict:
    cfg = {"command": args.command}
    cfg.update(kw)
    return _plain(cfg)


def _common_flags(args) -> dict:
    return {"with_rtt": args.with_rtt, "allow_lost": args.allow_lost, "rule": args.rule}


def run_check(args):
    N = args.n
    _check_N(N)
    sigma = parse_sigma(args.sigma, N)
    nil = parse_slots(args.j, N, "--j")
    J = parse_slots(args.J, N, "--J")
    bad = sorted(J - nil)
    if bad:
        raise InvalidInput("--J", args.J, args.J.find(str(bad[0])),
                           f"slot {bad[0]} is not nilpotent in --j")
    c = ContractionCandidate.make(N, sigma, nil, J)
    v = check_candidate(c, with_rtt=args.with_rtt, forbid_lost=not args.allow_lost,
                        rule=args.rule)
    rep = Report(_config(args, N=N, sigma=sigma, j=nil, J=J, **_common_flags(args)),
                 [_verdict_row(nil, J, sigma, v.antipode_ok, v.orthogonality_ok,
                               v.rtt_ok, v.witnesses)],
                 sections={"admissible": v.admissible,
                           "blocks": _plain(primitive_element_summary(c))})
    return rep, EXIT_OK if v.admissible else EXIT_FAIL


def run_sweep(args):
    N = args.n
    _check_N(N)
    res = enumerate_admissible(N, args.sigma_mode, with_rtt=args.with_rtt,
                               budget=args.budget, workers=args.workers,
                               forbid_lost=not args.allow_lost, rule=args.rule)
    rows = []
    for r in sorted(res.records):
        rtt = None
        if args.with_rtt:
            rtt = (r.nil, r.J, r.sigma) not in res.rtt_failures
        rows.append(_verdict_row(r.nil, r.J, r.sigma, True, True, rtt))
    diff = compare_to_catalog(res, N)
    failures = {f"{_j_text(nil)} J={_J_text(J)}": dict(sorted(cnt.items()))
                for (nil, J), cnt in sorted(res.failures.items())}
    rep = Report(_config(args, N=N, sigma_mode=args.sigma_mode, budget=args.budget,
                         **_common_flags(args)),
                 rows, _plain({"missing": diff.missing, "extra": diff.extra}),
                 sections={"checked": res.checked, "failures": failures})
    return rep, EXIT_OK if diff.empty else EXIT_FAIL


def run_kinematics(args):
    res = enumerate_admissible(5, args.sigma_mode, workers=args.workers)
    report = deformation_report(res)
    chain = chain_report(report)
    rows, groups = [], []
    for gr in report:
        nil = sorted(gr.group.nil)
        entries = []
        for r in gr.rows:
            entries.append({"J": list(r.J), "exists": r.exists,
                            "sigma": list(r.witness) if r.witness else None,
                            "failing": r.failing})
            if r.exists:
                rows.append(_verdict_row(nil, r.J, r.witness, True, True, None))
        groups.append({"key": gr.group.key, "name": gr.group.name, "j": nil,
                       "rows": entries,
                       "raw_sigma_count": {_J_text(r.J): len(res.sigmas_for(nil, r.J))
                                           for r in gr.rows}})
    links = [asdict(link) for link in chain.links]
    rep = Report(_config(args, N=5, sigma_mode=args.sigma_mode), rows, None,
                 sections={"groups": groups,
                           "chain": {"links": links, "verdict": chain.verdict}})
    return rep, EXIT_OK


def run_catalog(args):
    N = args.n
    _check_N(N)
    items = []
    for e in sorted(catalog(N), key=lambda e: (sorted(e.nil), sorted(e.J), e.source,
                                               e.sigma_witness or ())):
        items.append({"j": sorted(e.nil), "J": sorted(e.J), "source": e.source,
                      "sigma": list(e.sigma_witness) if e.sigma_witness else None,
                      "constraint": e.constraint})
    rep = Report(_config(args, N=N), [], None, sections={"catalog": items})
    return rep, EXIT_OK


# --------------------------------------------------------------------------
# table rendering


def _yes(x):
    return "n/a" if x is None else ("ok" if x else "FAIL")


def _table_check(rep):
    cfg, v = rep.config, rep.verdicts[0]
    lines = [f"N={cfg['N']} sigma={tuple(v['sigma'])} j={_j_text(v['j'])} J={_J_text(v['J'])}",
             f"  antipode       {_yes(v['antipode'])}",
             f"  orthogonality  {_yes(v['orthogonality'])}",
             f"  rtt            {_yes(v['rtt'])}",
             f"  admissible     {'yes' if rep.sections['admissible'] else 'no'}"]
    for k, br, kind in rep.sections["blocks"]:
        lines.append(f"  block {k}: ({br}) {kind}")
    for w in v["witnesses"]:
        lines.append("  witness: " + " | ".join(str(x) for x in w))
    return lines


def _table_sweep(rep):
    cfg = rep.config
    lines = [f"sweep N={cfg['N']} sigma_mode={cfg['sigma_mode']} rule={cfg['rule']} "
             f"allow_lost={cfg['allow_lost']} with_rtt={cfg['with_rtt']}",
             f"candidates checked: {rep.sections['checked']}",
             "admissible (j, J): count, first sigma"]
    groups: dict = {}
    for v in rep.verdicts:
        groups.setdefault((tuple(v["j"]), tuple(v["J"])), []).append(v)
    for (nil, J), vs in groups.items():
        extra = ""
        if cfg["with_rtt"]:
            extra = f", rtt ok {sum(1 for v in vs if v['rtt'])}"
        lines.append(f"  j={_j_text(nil):<12} J={_J_text(J):<10} {len(vs):>6}{extra}  "
                     f"{tuple(vs[0]['sigma'])}")
    diff = rep.catalog_diff
    if not diff["missing"] and not diff["extra"]:
        lines.append("catalog diff: EMPTY")
    else:
        lines.append("catalog diff:")
        for d in diff["missing"]:
            lines.append(f"  missing j={_j_text(d['j'])} J={_J_text(d['J'])} "
                         f"predicted by {', '.join(d['sources'])}")
        for d in diff["extra"]:
            lines.append(f"  extra   j={_j_text(d['j'])} J={_J_text(d['J'])} "
                         f"sigma={tuple(d['sigma'])}")
    return lines


def _table_kinematics(rep):
    lines = ["group            j       J          admissible  witness / failing"]
    for g in rep.sections["groups"]:
        for r in g["rows"]:
            info = str(tuple(r["sigma"])) if r["exists"] else f"fails {r['failing']}"
            lines.append(f"{g['name']:<16} {_j_text(g['j']):<7} {_J_text(r['J']):<10} "
                         f"{'yes' if r['exists'] else 'no':<11} {info}")
        if not any(r["exists"] for r in g["rows"]):
            lines.append(f"{g['name']:<16} none")
    lines.append("raw admissible sigma counts:")
    for g in rep.sections["groups"]:
        counts = ", ".join(f"J={k}: {n}" for k, n in g["raw_sigma_count"].items())
        lines.append(f"  {g['name']:<16} {counts}")
    chain = rep.sections["chain"]
    for link in chain["links"]:
        mark = "ok" if link["quantizable"] else "BROKEN"
        lines.append(f"{link['source']} -> {link['target']}: {mark} ({link['evidence']})")
    lines.append(f"chain: {chain['verdict']}")
    return lines


def _table_catalog(rep):
    lines = [f"catalog N={rep.config['N']}"]
    for e in rep.sections["catalog"]:
        sigma = tuple(e["sigma"]) if e["sigma"] else "-"
        lines.append(f"  j={_j_text(e['j']):<14} J={_J_text(e['J']):<12} "
                     f"{e['source']:<28} sigma={sigma}  [{e['constraint']}]")
    return lines


_TABLES = {"check": _table_check, "sweep": _table_sweep,
           "kinematics": _table_kinematics, "catalog": _table_catalog}
_RUN = {"check": run_check, "sweep": run_sweep,
        "kinematics": run_kinematics, "catalog": run_catalog}


def render(rep: Report, fmt: str) -> str:
    if fmt == "json":
        return rep.to_json() + "\n"
    return "\n".join(_TABLES[rep.config["command"]](rep)) + "\n"


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--format", choices=("table", "json"), default="table")
    out.add_argument("--out", metavar="FILE", help="write the report to FILE")

    cond = argparse.ArgumentParser(add_help=False)
    cond.add_argument("--with-rtt", action="store_true",
                      help="also report the RTT relations (not part of admissibility)")
    cond.add_argument("--allow-lost", action="store_true",
                      help="do not reject relations that vanish identically")
    cond.add_argument("--rule", choices=RULES, default="rank")

    pool = argparse.ArgumentParser(add_help=False)
    pool.add_argument("--workers", type=int, default=None,
                      help=f"worker processes (default: ${WORKERS_ENV} or 1)")

    p = argparse.ArgumentParser(prog="ckquantum",
                                description="Contractions of quantum orthogonal groups")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[out, cond], help="check one candidate")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--sigma", default="id")
    c.add_argument("--j", default="none", help="nilpotent slots, e.g. 2,3")
    c.add_argument("--J", default="1", help="slots of J, or 1")

    s = sub.add_parser("sweep", parents=[out, cond, pool], help="exhaustive sweep")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--sigma-mode", choices=SIGMA_MODES, default="full")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    k = sub.add_parser("kinematics", parents=[out, pool], help="kinematic groups at N=5")
    k.add_argument("--sigma-mode", choices=SIGMA_MODES, default="canonical")

    g = sub.add_parser("catalog", parents=[out], help="print the theorem sets")
    g.add_argument("--n", type=int, required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", None) is None and hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        rep, code = _RUN[args.command](args)
    except InvalidInput as e:
        print(e.render(), file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    text = render(rep, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
