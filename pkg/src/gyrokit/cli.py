"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a counterexample was found,
2 for unreadable input or bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .core import Exhaustive, GyroError, LawReport, SamplePlan, check_axioms, check_identities
from .einstein import EinsteinModel, admissible, e_gyr
from .finite import CayleyGyrogroup, InvalidTable, from_table
from .search import SearchOptions, order_ceiling, search_all
from .subquotient import (
    CosetWarning,
    NotLSubgyrogroup,
    Subset,
    check_coset_partition,
    coset_space,
    enumerate_subgyrogroups,
    is_L_subgyrogroup,
    l_witness,
    subgyrogroup_witness,
    verify_coset_absorption,
)
from . import topo

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# table rejections that mean the file is not a table at all
MALFORMED = ("shape", "range", "labels")


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: list[str]
    reports: list[LawReport] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "command": self.command,
            "passed": self.passed,
            "reports": [r.to_dict() for r in self.reports],
            "data": self.data,
        }
        if timing:
            d["duration_s"] = round(self.duration, 6)
        return d


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _vec(text: str, model: EinsteinModel):
    try:
        comps = [float(p) for p in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}")
    try:
        return admissible(model, comps)
    except ValueError as e:
        raise InputError(str(e))


def _set(text: str, n: int) -> Subset:
    try:
        elems = [int(p) for p in text.split(",") if p.strip()]
        return Subset.of(n, elems)
    except ValueError as e:
        raise InputError(f"bad element set {text!r}: {e}")


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}")


def _load_table(path: str) -> CayleyGyrogroup:
    from .finite import table_from_json

    data = _read_json(path)
    try:
        return table_from_json(data)
    except InvalidTable:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise InputError(f"{path}: {e}")


def _load_model(path: str) -> topo.FiniteTopoGyro:
    data = _read_json(path)
    try:
        return topo.model_from_json(data, Path(path).parent)
    except (ValueError, TypeError, KeyError) as e:
        raise InputError(f"{path}: {e}")


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(args, run: RunReport) -> None:
    data = _read_json(args.file)
    if not isinstance(data, dict) or "table" not in data:
        raise InputError("table JSON must be an object with a 'table' key")
    try:
        g = from_table(data["table"], data.get("labels"))
    except InvalidTable as e:
        if e.axiom in ("shape", "range", "labels"):
            raise InputError(str(e))
        run.data["error"] = str(e)
        run.reports.extend(e.reports or [LawReport(e.axiom, 1, 1, counterexample=e.counterexample or ())])
        return
    run.reports.extend(g.reports)
    run.reports.extend(check_identities(g, Exhaustive()))
    run.data.update({
        "order": g.n,
        "non_associative": not g.is_group(),
        "nontrivial_gyrations": len(g.nontrivial_gyrations()),
    })


def cmd_search(args, run: RunReport) -> None:
    if args.order > order_ceiling() or args.order < 1:
        raise InputError(f"order must lie in [1, {order_ceiling()}]")
    opts = SearchOptions(args.order, isomorph_rejection=not args.all_labelings,
                         non_groups_only=args.non_groups, cap=args.cap)
    found = search_all(opts, jobs=args.jobs)
    groups = sum(g.is_group() for g in found)
    run.data.update({
        "order": args.order,
        "count": len(found),
        "groups": groups,
        "non_groups": len(found) - groups,
        "tables": [[list(r) for r in g.table] for g in found],
    })
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(found):
            (out / f"order{args.order}_{i:03d}.json").write_text(
                json.dumps(g.to_json(), sort_keys=True) + "\n")


def cmd_laws(args, run: RunReport) -> None:
    data = _read_json(args.file)
    try:
        g = CayleyGyrogroup(data["table"])
    except (InvalidTable, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{args.file}: {e}")
    run.reports.extend(check_axioms(g, Exhaustive()))
    run.reports.extend(check_identities(g, Exhaustive()))


def cmd_einstein(args, run: RunReport) -> None:
    model = EinsteinModel(dim=args.dim, c=args.c, tolerance=args.tol)
    if args.sub == "laws":
        plan = SamplePlan(args.samples, args.seed)
        run.reports.extend(check_axioms(model, plan))
        run.reports.extend(check_identities(model, plan))
        run.data.update({"samples": args.samples, "seed": args.seed, "c": args.c,
                         "dim": args.dim, "tolerance": args.tol})
        return
    vecs = [_vec(v, model) for v in args.vectors]
    need = {"add": 2, "gyr": 3, "gamma": 1}[args.sub]
    if len(vecs) != need:
        raise InputError(f"einstein {args.sub} takes {need} vector(s)")
    if args.sub == "add":
        result = model.add(*vecs)
    elif args.sub == "gyr":
        result = e_gyr(model, *vecs)
    else:
        result = model.gamma(vecs[0])
    run.data["result"] = result
    run.data["text"] = _fmt(result) if args.sub == "gamma" else ",".join(map(_fmt, result))


def cmd_subgyro(args, run: RunReport) -> None:
    g = _load_table(args.file)
    subs = enumerate_subgyrogroups(g)
    listing = [{"h": H.sorted(), "l_subgyrogroup": is_L_subgyrogroup(g, H)} for H in subs]
    if args.l_only:
        listing = [e for e in listing if e["l_subgyrogroup"]]
    run.data["subgyrogroups"] = listing


def _check_h(g: CayleyGyrogroup, H: Subset, run: RunReport) -> bool:
    """Record a failing report with a witness unless H is an L-subgyrogroup."""
    if not H.mask:
        raise InputError("H must be nonempty")
    w = subgyrogroup_witness(g, H)
    if w is not None:
        run.reports.append(LawReport("subgyrogroup", 1, 1, counterexample=w))
        return False
    w = l_witness(g, H)
    if w is not None:
        run.reports.append(LawReport("L-subgyrogroup", 1, 1, counterexample=w,
                                     note="gyr[a, h](H) != H"))
        return False
    return True


def cmd_cosets(args, run: RunReport) -> None:
    g = _load_table(args.file)
    H = _set(args.h, g.n)
    is_l = _check_h(g, H, run)
    if run.reports and run.reports[-1].law == "subgyrogroup":
        return
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CosetWarning)
            cs = coset_space(g, H)
    except NotLSubgyrogroup as e:
        run.reports.append(LawReport("partition", 1, 1, counterexample=e.witness))
        return
    run.data.update(cs.to_json())
    run.reports.extend(check_coset_partition(cs))
    if is_l:
        run.reports.append(verify_coset_absorption(g, H))


def cmd_topo(args, run: RunReport) -> None:
    model = _load_model(args.file)
    sub = args.sub
    if sub == "check":
        run.reports.extend(topo.check_continuity(model))
        run.data["opens"] = len(model.opens) if model.n <= topo.MATERIALIZE_LIMIT else None
        run.data["base"] = [U.sorted() for U in model.base]
    elif sub == "uc":
        run.reports.extend(topo.verify_UC(model))
        run.reports.append(topo.verify_overlap_step(model))
        refiners = {}
        for V in model.base:
            try:
                V1, reps = topo.find_star_refiner(model, V)
            except topo.NotCubeClosed:
                continue
            refiners[",".join(map(str, V.sorted()))] = V1.sorted()
            run.reports.extend(reps)
        run.data["star_refiners"] = refiners
    elif sub == "chain":
        starts = [_set(args.start, model.n)] if args.start else list(model.base)
        chains = []
        for U in starts:
            try:
                ch = topo.admissible_chain(model, U)
            except topo.ChainStuck as e:
                run.reports.append(LawReport("chain", 1, 1, counterexample=(U.sorted(),), note=str(e)))
                continue
            chains.append(ch.to_json())
            run.reports.extend(topo.check_chain_subgyrogroup(model, ch))
        run.data["chains"] = chains
    elif sub in ("quotient", "zerodim"):
        H = _set(args.h, model.n)
        if not _check_h(model.g, H, run):
            return
        if sub == "quotient":
            q = topo.quotient_topology(model, H)
            run.reports.extend(topo.verify_pi_open(model, H))
            run.data["cosets"] = [c.sorted() for c in q.cosets.cosets]
            run.data["quotient_opens"] = sorted(sorted(O) for O in q.opens)
        else:
            run.reports.append(topo.zero_dimensional_transfer(model, H))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gyrokit", description="Gyrogroup algebra toolkit")
    p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    p.add_argument("--timing", action="store_true", help="include wall-clock duration in --json")
    sp = p.add_subparsers(dest="cmd", required=True)

    def common(q):
        q.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        q.add_argument("--timing", action="store_true", default=argparse.SUPPRESS)
        return q

    q = common(sp.add_parser("validate", help="validate a table file"))
    q.add_argument("file")
    q.set_defaults(func=cmd_validate)

    q = common(sp.add_parser("laws", help="run the law suites on a table file"))
    q.add_argument("file")
    q.set_defaults(func=cmd_laws)

    q = common(sp.add_parser("search", help="enumerate gyrogroups of a given order"))
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--non-groups", action="store_true")
    q.add_argument("--cap", type=int)
    q.add_argument("--all-labelings", action="store_true",
                   help="disable isomorph rejection and emit every labeled table")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--out", help="directory for emitted table files")
    q.set_defaults(func=cmd_search)

    q = common(sp.add_parser("einstein", help="Einstein velocity addition"))
    q.add_argument("sub", choices=["add", "gyr", "gamma", "laws"])
    q.add_argument("vectors", nargs="*", help="comma-separated components")
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--dim", type=int, default=3)
    q.add_argument("--tol", type=float, default=1e-9)
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_einstein)

    q = common(sp.add_parser("subgyro", help="list subgyrogroups"))
    q.add_argument("file")
    q.add_argument("--l-only", action="store_true")
    q.set_defaults(func=cmd_subgyro)

    q = common(sp.add_parser("cosets", help="left cosets of a subgyrogroup"))
    q.add_argument("file")
    q.add_argument("--h", required=True)
    q.set_defaults(func=cmd_cosets)

    q = common(sp.add_parser("topo", help="finite topological model checks"))
    q.add_argument("sub", choices=["check", "uc", "chain", "quotient", "zerodim"])
    q.add_argument("file")
    q.add_argument("--start")
    q.add_argument("--h")
    q.set_defaults(func=cmd_topo)
    return p


def _render(run: RunReport, args) -> str:
    lines = [f"$ gyrokit {' '.join(run.command)}"]
    for key in ("error", "text"):
        if key in run.data:
            lines.append(str(run.data[key]))
    if "non_associative" in run.data:
        lines.append(f"non-associative: {str(run.data['non_associative']).lower()}")
    if args.cmd == "search":
        d = run.data
        lines.append(f"order {d['order']}: {d['count']} tables "
                     f"({d['groups']} groups, {d['non_groups']} non-groups)")
    if "subgyrogroups" in run.data:
        for e in run.data["subgyrogroups"]:
            lines.append(f"{e['h']} L={str(e['l_subgyrogroup']).lower()}")
    if "cosets" in run.data and args.cmd == "cosets":
        for c in run.data["cosets"]:
            lines.append(str(c))
    for ch in run.data.get("chains", []):
        lines.append(f"chain {ch['members']} -> H = {ch['h']}")
    for r in run.reports:
        lines.append(str(r))
    lines.append(f"overall: {'pass' if run.passed else 'fail'} ({run.duration:.3f}s)")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd == "topo" and args.sub in ("quotient", "zerodim") and not args.h:
        parser.error(f"topo {args.sub} needs --h")
    run = RunReport(command=argv)
    t0 = time.perf_counter()
    try:
        args.func(args, run)
    except InputError as e:
        print(f"gyrokit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidTable, topo.InvalidModel) as e:
        print(f"gyrokit: {e}", file=sys.stderr)
        if isinstance(e, InvalidTable) and e.axiom in MALFORMED:
            return EXIT_USAGE
        return EXIT_FAIL
    except GyroError as e:
        print(f"gyrokit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    run.duration = time.perf_counter() - t0
    if args.json:
        print(json.dumps(run.to_dict(args.timing), sort_keys=True, indent=2))
    else:
        print(_render(run, args))
    return EXIT_OK if run.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
