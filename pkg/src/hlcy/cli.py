"""``hlcy`` command line: homology tables and verification reports.

Exit codes: 0 success, 1 a verification check failed, 2 usage error or a
slice request that does not cut out a finite basis.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from hlcy import __version__
from hlcy.complexes import COMPLEX_NAMES, _ID_ALIASES, build_slice, homology, make_complex
from hlcy.grid import parallel_map, resolve_jobs
from hlcy.liealg import AssocPresentation, PresentationError, get_algebra
from hlcy.words import InfiniteSliceError, render_chain

MAX_DEGREE_BOUND = 8
ROW_FIELDS = ["complex", "algebra", "weight", "length", "degree",
              "dim_chains", "dim_cycles", "dim_boundaries", "dim_homology", "representatives"]
CHECK_FIELDS = ["name", "anchor", "pass", "witness"]

DEFAULT_EXACTNESS = (("pirashvili", "sl2"), ("pirashvili", "solvable2"),
                     ("connes", "dual-numbers"), ("connes", "truncated3"))


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    target: Optional[str] = None                   # verify sub-target
    complexes: List[str] = field(default_factory=list)
    algebras: List[str] = field(default_factory=list)
    weights: List[Optional[int]] = field(default_factory=lambda: [None])
    lengths: List[Optional[int]] = field(default_factory=lambda: [None])
    min_degree: int = 0
    max_degree: Optional[int] = None
    fmt: str = "json"
    output: Optional[str] = None
    jobs: int = 1
    reps: bool = True

    def as_dict(self):
        return {"command": self.command, "target": self.target, "complexes": self.complexes,
                "algebras": self.algebras, "weights": self.weights, "lengths": self.lengths,
                "min_degree": self.min_degree, "max_degree": self.max_degree, "reps": self.reps}


# --- argument types ---------------------------------------------------------------------

def int_list(text: str) -> List[int]:
    """``3``, ``-1,0,2`` or a range ``-2..3``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                a, b = part.split("..")
                lo, hi = int(a), int(b)
                if hi < lo:
                    raise ValueError
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")
    return out


def algebra_list(text: str) -> List[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        try:
            get_algebra(n)
        except PresentationError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    return names


def complex_list(text: str) -> List[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if _ID_ALIASES.get(n, n) not in COMPLEX_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown complex {n!r}; choose from {', '.join(COMPLEX_NAMES)}")
    return [_ID_ALIASES.get(n, n) for n in names]


def _flatten(xs):
    return [y for x in xs for y in x] if xs else None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hlcy", description="Exact homology of graded slices.")
    p.add_argument("--version", action="version", version=f"hlcy {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi=False):
        sp.add_argument("--algebra", type=algebra_list, action="append",
                        help="witt, uwitt, a fixture name, U(name) or a JSON table" +
                             (" (comma list)" if multi else ""))
        sp.add_argument("--weight", type=int_list, action="append", help="weights, e.g. 0 or -2..3")
        sp.add_argument("--length", type=int_list, action="append", help="length (L) values or caps")
        sp.add_argument("--min-degree", type=int, default=0)
        sp.add_argument("--max-degree", type=int, default=None)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--output", "-o", default=None)
        sp.add_argument("--jobs", "-j", type=int, default=None, help="worker processes (default $HLCY_JOBS or 1)")
        sp.add_argument("--no-reps", dest="reps", action="store_false", help="omit homology representatives")

    h = sub.add_parser("homology", help="homology of one complex over a weight/length grid")
    h.add_argument("--complex", type=complex_list, required=True)
    common(h)
    t = sub.add_parser("table", help="batch grid over several complexes and algebras")
    t.add_argument("--complex", type=complex_list, action="append", required=True)
    common(t, multi=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("target", choices=("axioms", "ladder", "exactness", "gv"))
    common(v)
    return p


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(ns.command, target=getattr(ns, "target", None), fmt=ns.fmt, output=ns.output,
                    min_degree=ns.min_degree, max_degree=ns.max_degree, reps=ns.reps)
    cx = getattr(ns, "complex", None)
    if cx:
        cfg.complexes = cx if ns.command == "homology" else _flatten(cx)
    cfg.algebras = _flatten(ns.algebra) or []
    cfg.weights = _flatten(ns.weight) or [None]
    cfg.lengths = _flatten(ns.length) or [None]
    if cfg.max_degree is not None and not 0 <= cfg.max_degree <= MAX_DEGREE_BOUND:
        raise UsageError(f"--max-degree must lie in 0..{MAX_DEGREE_BOUND}")
    if cfg.min_degree < 0 or (cfg.max_degree is not None and cfg.min_degree > cfg.max_degree):
        raise UsageError("--min-degree must lie in 0..max-degree")
    if ns.command == "homology" and len(cfg.complexes) != 1:
        raise UsageError("homology takes a single --complex; use table for several")
    if ns.command == "homology" and len(cfg.algebras) > 1:
        raise UsageError("homology takes a single --algebra; use table for several")
    try:
        cfg.jobs = resolve_jobs(ns.jobs)
    except ValueError as exc:
        raise UsageError(str(exc))
    return cfg


# --- homology grid --------------------------------------------------------------------------

def homology_cell(cell) -> List[Dict]:
    cname, alg_name, weight, length, lo, hi, reps = cell
    alg = get_algebra(alg_name)
    if weight is not None and not alg.graded:
        raise UsageError(f"{alg_name} carries no weight grading; drop --weight")
    cx = make_complex(cname, alg)
    s = build_slice(cx, weight, range(lo, hi + 2), length)
    rep = homology(s, reps=reps)
    rows = []
    for n in range(lo, hi + 1):
        h = rep.degrees[n]
        rows.append({
            "complex": cname, "algebra": alg_name, "weight": weight, "length": length, "degree": n,
            "dim_chains": h.dim_chains, "dim_cycles": h.dim_cycles,
            "dim_boundaries": h.dim_boundaries, "dim_homology": h.dim,
            "representatives": [render_chain(cx.render_kind, c, alg.names) for c in h.representatives],
        })
    return rows


def cmd_homology(cfg: RunConfig) -> Dict:
    hi = cfg.max_degree if cfg.max_degree is not None else 4
    algebras = cfg.algebras or ["witt"]
    cells = [(c, a, w, L, cfg.min_degree, hi, cfg.reps)
             for c in cfg.complexes for a in algebras for w in cfg.weights for L in cfg.lengths]
    rows = [r for rs in parallel_map(homology_cell, cells, cfg.jobs) for r in rs]
    return {"rows": rows, "checks": []}


# --- verification ---------------------------------------------------------------------------

def _check(name, anchor, passed, witness=None):
    d = {"name": name, "anchor": anchor, "pass": bool(passed)}
    if witness:
        d["witness"] = {k: str(v) for k, v in witness.items()}
    return d


def verify_axioms(cfg: RunConfig) -> List[Dict]:
    from hlcy import axioms
    kw = {}
    if cfg.max_degree is not None:
        kw["max_degree"] = cfg.max_degree
    if cfg.weights != [None]:
        kw["weights"] = tuple(w for w in cfg.weights if w is not None)
    if cfg.lengths != [None]:
        kw["max_length"] = max(L for L in cfg.lengths if L is not None)
    out = []
    for r in axioms.run_suite(jobs=cfg.jobs, **kw):
        wit = dict(r.witness)
        wit["basis_words"] = str(r.cells)
        out.append(_check(r.name, r.anchor, r.passed, wit))
    return out


def _les_checks(rep, tag) -> List[Dict]:
    out = []
    for pos in rep.positions:
        if pos.exact is None:
            continue
        out.append(_check(f"{tag} exact at {pos.group}", "rank(incoming) = dim ker(outgoing)", pos.exact,
                          {"dim": pos.dim, "rank_in": pos.rank_in, "rank_out": pos.rank_out}))
    dims = "; ".join(f"{g}: " + ",".join(str(d[n]) for n in sorted(d)) for g, d in rep.homology_dims.items())
    out.append(_check(f"{tag} homology dimensions", "dimensions by degree from 0", True, {"dims": dims}))
    return out


def _ses_cell(cell):
    from hlcy.maps import assemble_les, connes_ses, pirashvili_ses, ses_slices
    kind, alg_name, weight, length, max_degree = cell
    A = get_algebra(alg_name)
    ses = pirashvili_ses(A) if kind == "pirashvili" else connes_ses(A)
    sl = ses_slices(ses, weight, range(0, max_degree + 3), length)
    return _les_checks(assemble_les(sl, range(0, max_degree + 2)), f"{kind}({alg_name})")


def verify_exactness(cfg: RunConfig) -> List[Dict]:
    md = cfg.max_degree if cfg.max_degree is not None else 4
    if cfg.algebras:
        pairs = []
        for a in cfg.algebras:
            pairs.append(("pirashvili", a))
            if isinstance(get_algebra(a), AssocPresentation):
                pairs.append(("connes", a))
    else:
        pairs = list(DEFAULT_EXACTNESS)
    cells = [(k, a, w, L, md) for k, a in pairs for w in cfg.weights for L in cfg.lengths]
    return [c for cs in parallel_map(_ses_cell, cells, cfg.jobs) for c in cs]


def _ladder_cell(cell):
    from hlcy.maps import verify_ladder
    alg_name, weight, length, md = cell
    A = get_algebra(alg_name)
    if not isinstance(A, AssocPresentation):
        raise UsageError(f"ladder needs an associative algebra, got {alg_name}")
    rep = verify_ladder(A, weight=weight, max_degree=md, length=length)
    out = _les_checks(rep.top, f"pirashvili({alg_name})") + _les_checks(rep.bottom, f"connes({alg_name})")
    for k, ok in rep.squares.items():
        out.append(_check(f"square {k} ({alg_name})", "ladder square commutes on homology", ok))
    for k, ok in rep.lemma.items():
        out.append(_check(f"lemma {k} ({alg_name})", "y -> pi2(b'h y)/n is an isomorphism", ok))
    return out


def verify_ladder_cmd(cfg: RunConfig) -> List[Dict]:
    md = cfg.max_degree if cfg.max_degree is not None else 4
    cells = [(a, w, L, md) for a in (cfg.algebras or ["dual-numbers"]) for w in cfg.weights for L in cfg.lengths]
    return [c for cs in parallel_map(_ladder_cell, cells, cfg.jobs) for c in cs]


def verify_gv(cfg: RunConfig) -> List[Dict]:
    from hlcy.maps import gv_pipeline
    rep = gv_pipeline()
    out = [_check(c.name, c.anchor, c.passed, c.witness) for c in rep.checks]
    if len(out) < 9:
        out.append(_check("pipeline halted", "all nine checks run", False,
                          {"failed": rep.failed.name if rep.failed else "?"}))
    return out


VERIFIERS = {"axioms": verify_axioms, "exactness": verify_exactness,
             "ladder": verify_ladder_cmd, "gv": verify_gv}


def cmd_verify(cfg: RunConfig) -> Dict:
    return {"rows": [], "checks": VERIFIERS[cfg.target](cfg)}


# --- output -----------------------------------------------------------------------------------

def render(cfg: RunConfig, body: Dict) -> str:
    doc = {"tool": "hlcy", "version": __version__, "command": cfg.command,
           "config": cfg.as_dict(), "rows": body["rows"], "checks": body["checks"]}
    if cfg.fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if cfg.fmt == "csv":
        buf = io.StringIO()
        if cfg.command == "verify":
            w = csv.DictWriter(buf, fieldnames=CHECK_FIELDS, lineterminator="\n")
            w.writeheader()
            for c in body["checks"]:
                wit = c.get("witness", {})
                w.writerow({**c, "pass": str(c["pass"]).lower(),
                            "witness": "; ".join(f"{k}={v}" for k, v in wit.items())})
        else:
            w = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
            w.writeheader()
            for r in body["rows"]:
                w.writerow({**r, "weight": "" if r["weight"] is None else r["weight"],
                            "length": "" if r["length"] is None else r["length"],
                            "representatives": " | ".join(r["representatives"])})
        return buf.getvalue()
    lines = []
    if body["rows"]:
        lines.append(f"{'complex':<12} {'algebra':<14} {'wt':>3} {'L':>3} {'n':>2} "
                     f"{'C':>6} {'Z':>6} {'B':>6} {'H':>4}  representatives")
        for r in body["rows"]:
            wt = "-" if r["weight"] is None else r["weight"]
            L = "-" if r["length"] is None else r["length"]
            lines.append(f"{r['complex']:<12} {r['algebra']:<14} {wt:>3} {L:>3} {r['degree']:>2} "
                         f"{r['dim_chains']:>6} {r['dim_cycles']:>6} {r['dim_boundaries']:>6} "
                         f"{r['dim_homology']:>4}  {' | '.join(r['representatives'])}")
    for c in body["checks"]:
        lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}  [{c['anchor']}]")
        for k, v in c.get("witness", {}).items():
            lines.append(f"      {k}: {v}")
    if body["checks"]:
        n_ok = sum(c["pass"] for c in body["checks"])
        lines.append(f"{n_ok}/{len(body['checks'])} checks passed")
    return "\n".join(lines) + "\n"


def _glue_negative(argv: List[str]) -> List[str]:
    # argparse reads "-1..2" as an option; bind it to the preceding flag
    out: List[str] = []
    k = 0
    while k < len(argv):
        a = argv[k]
        if a in ("--weight", "--length") and k + 1 < len(argv) and argv[k + 1][:2].lstrip("-")[:1].isdigit() \
                and argv[k + 1].startswith("-"):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(_glue_negative(list(sys.argv[1:] if argv is None else argv)))
    try:
        cfg = config_from_args(ns)
        body = cmd_verify(cfg) if cfg.command == "verify" else cmd_homology(cfg)
    except (UsageError, InfiniteSliceError, PresentationError) as exc:
        print(f"hlcy: error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, body)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c["pass"] for c in body["checks"]) else 1


if __name__ == "__main__":
    sys.exit(main())
