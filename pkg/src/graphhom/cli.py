"""Command line front end.

Subcommands cover diagram validation, link-family enumeration,
classical invariants, both homology flavors, randomized move
scrambling, and the bundled census regression corpus.  All structured
output is JSON with sorted keys so identical invocations are
byte-identical; "-" reads the input from stdin.

Exit codes: 0 success, 1 a check failed or a cap skipped part of the
work, 2 unusable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .diagrams import GraphDiagram
from .errors import CapExceeded, GraphhomError, InvalidDiagram
from .floer import euler_matches_skein, hat_euler, hat_from_grid, total_homology_from_grid
from .graph_homology import SKIP_GRID, graph_homology
from .grid import GridDiagram, grid_to_diagram, pd_to_grid, simplify_grid
from .invariants import alexander, conway, determinant, fingerprint, jones, reduce_diagram
from .kauffman import family
from .khovanov import graded_euler, khovanov_homology, unnormalized_jones
from .moves import random_move_sequence

_CENSUS_PACKAGE = "graphhom.census"


class _Exit(Exception):
    """Abort with a message on stderr and a specific exit code."""

    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Exit(2, f"cannot read {path}: {exc.strerror}")


def _load_json(path: str) -> dict:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Exit(
            2,
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
        )


def _load_diagram(path: str) -> GraphDiagram:
    doc = _load_json(path)
    try:
        return GraphDiagram.from_json(doc)
    except InvalidDiagram as exc:
        raise _Exit(2, f"{path}: invalid diagram: {exc}")
    except (KeyError, TypeError, ValueError) as exc:
        raise _Exit(2, f"{path}: not a diagram document: {exc}")


def _require_link(d: GraphDiagram, path: str) -> GraphDiagram:
    if not d.is_link():
        raise _Exit(2, f"{path}: this command needs a link diagram (no vertices)")
    return d


def _memory_guard() -> None:
    raw = os.environ.get("GRAPHHOM_MAX_MEM")
    if not raw:
        return
    scale = {"k": 2**10, "m": 2**20, "g": 2**30}
    try:
        mult = scale.get(raw[-1].lower())
        limit = int(raw[:-1]) * mult if mult else int(raw)
    except ValueError:
        raise _Exit(2, f"GRAPHHOM_MAX_MEM={raw!r} is not a byte count")
    try:
        import resource as res

        res.setrlimit(res.RLIMIT_AS, (limit, limit))
    except (ImportError, ValueError, OSError) as exc:
        raise _Exit(2, f"cannot apply memory limit {raw}: {exc}")


# -- subcommands -----------------------------------------------------------


def _cmd_validate(args) -> int:
    d = _load_diagram(args.path)
    try:
        d.validate_strict()
    except InvalidDiagram as exc:
        raise _Exit(2, f"{args.path}: invalid diagram: {exc}")
    doc = {
        "valid": True,
        "crossings": len(d.crossings),
        "vertices": len(d.vertices),
        "loops": d.loops,
        "link": d.is_link(),
    }
    if d.is_link():
        doc["components"] = d.split_components()[0]
    _emit(doc)
    return 0


def _cmd_family(args) -> int:
    d = _load_diagram(args.path)
    try:
        fam = family(d, cap=args.max_assignments)
    except CapExceeded as exc:
        raise _Exit(1, str(exc))
    _emit(fam.to_json())
    return 0


def _cmd_invariants(args) -> int:
    d = _require_link(_load_diagram(args.path), args.path)
    fp = fingerprint(d)
    _emit(
        {
            "components": fp.components,
            "jones": fp.jones.to_json(),
            "alexander": fp.alexander.to_json(),
            "conway": conway(d).to_json(),
            "determinant": determinant(d),
            "reduced_crossings": len(reduce_diagram(d).crossings),
        }
    )
    return 0


def _cmd_khovanov(args) -> int:
    d = _require_link(_load_diagram(args.path), args.path)
    reduced = reduce_diagram(d)
    if len(reduced.crossings) > args.max_crossings:
        _emit(
            {
                "skip": "khovanov: skipped (too many crossings)",
                "crossings": len(reduced.crossings),
            }
        )
        return 1
    dims = khovanov_homology(reduced, args.coeffs, args.max_crossings)
    doc = {
        "coeffs": args.coeffs,
        "dims": dims.to_json(),
        "euler": graded_euler(dims).to_json(),
    }
    code = 0
    if args.check_euler:
        ok = graded_euler(dims) == unnormalized_jones(d)
        doc["euler_check"] = "pass" if ok else "fail"
        code = 0 if ok else 1
    _emit(doc)
    return code


def _looks_like_grid(doc: dict) -> bool:
    return isinstance(doc, dict) and {"n", "X", "O"} <= set(doc)


def _cmd_floer(args) -> int:
    doc = _load_json(args.path)
    if _looks_like_grid(doc):
        try:
            g = GridDiagram.from_json(doc)
        except InvalidDiagram as exc:
            raise _Exit(2, f"{args.path}: invalid grid: {exc}")
        d = grid_to_diagram(g)
        source = "grid"
    else:
        try:
            d = GraphDiagram.from_json(doc)
        except InvalidDiagram as exc:
            raise _Exit(2, f"{args.path}: invalid diagram: {exc}")
        _require_link(d, args.path)
        g = pd_to_grid(d)
        source = "link"
    g = simplify_grid(g)
    out: dict = {"source": source, "grid": g.to_json(), "components": g.component_count()}
    if g.n > args.max_grid:
        out["skip"] = SKIP_GRID
        _emit(out)
        return 1
    hat = hat_from_grid(g, args.max_grid)
    check = euler_matches_skein(hat, d)
    out.update(
        {
            "hat": hat.to_json(),
            "euler": hat_euler(hat).to_json(),
            "euler_check": check,
            "total_poincare": total_homology_from_grid(g, args.max_grid).to_json(),
        }
    )
    _emit(out)
    return 0 if check["verdict"] == "pass" else 1


def _cmd_graph_homology(args) -> int:
    d = _load_diagram(args.path)
    want_floer = args.floer or not (args.floer or args.khovanov)
    want_khovanov = args.khovanov or not (args.floer or args.khovanov)
    kwargs = dict(
        floer=want_floer,
        khovanov=want_khovanov,
        coeffs=args.coeffs,
        grid_cap=args.max_grid,
        crossing_cap=args.max_crossings,
        multiset=args.multiset,
    )
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                report = graph_homology(d, mapper=pool.map, **kwargs)
        else:
            report = graph_homology(d, **kwargs)
    except CapExceeded as exc:
        raise _Exit(1, str(exc))
    doc = report.to_json()
    if args.summary:
        summary: dict = {"verdicts": report.verdicts, "empty_family": report.empty_family}
        if report.aggregate_floer is not None:
            summary["floer_poincare"] = report.aggregate_floer.poincare().to_json()
            summary["floer_euler"] = report.aggregate_floer_euler.to_json()
        if report.aggregate_khovanov is not None:
            summary["khovanov_poincare"] = report.aggregate_khovanov.poincare().to_json()
            summary["khovanov_euler"] = report.aggregate_khovanov_euler.to_json()
        _emit(summary)
    else:
        _emit(doc)
    states = set(report.verdicts.values())
    return 0 if states <= {"pass"} else 1


def _cmd_moves(args) -> int:
    d = _load_diagram(args.path)
    kinds = set(args.kinds.split(",")) if args.kinds else None
    mutated, applied = random_move_sequence(
        d, count=args.count, seed=args.seed, budget=args.budget, kinds=kinds
    )
    sys.stderr.write(f"applied {len(applied)} moves\n")
    _emit(mutated.to_json())
    return 0


# -- census ----------------------------------------------------------------


def _census_dir():
    return resources.files(_CENSUS_PACKAGE)


def _census_names() -> List[str]:
    names = []
    for entry in _census_dir().iterdir():
        if entry.name.endswith(".diagram.json"):
            names.append(entry.name[: -len(".diagram.json")])
    return sorted(names)


def _census_report(doc: dict) -> dict:
    """Deterministic per-entry report; golden files hold its serialization."""
    d = GraphDiagram.from_json(doc)
    if d.is_link():
        out: dict = {"kind": "link", "fingerprint": fingerprint(d).to_json()}
        reduced = reduce_diagram(d)
        dims = khovanov_homology(reduced, "z")
        out["khovanov"] = dims.to_json()
        out["khovanov_euler"] = graded_euler(dims).to_json()
        out["jones_check"] = (
            "pass" if graded_euler(dims) == unnormalized_jones(d) else "fail"
        )
        g = simplify_grid(pd_to_grid(d))
        out["grid_size"] = g.n
        if g.n <= 8:
            hat = hat_from_grid(g)
            out["floer"] = hat.to_json()
            out["floer_check"] = euler_matches_skein(hat, d)
            out["total_poincare"] = total_homology_from_grid(g).to_json()
        else:
            out["floer_skip"] = SKIP_GRID
        return out
    report = graph_homology(d)
    return {"kind": "graph", "graph_homology": report.to_json()}


def _census_entry_status(name: str, write: bool) -> Tuple[str, str]:
    base = _census_dir()
    doc = json.loads((base / f"{name}.diagram.json").read_text(encoding="utf-8"))
    text = json.dumps(_census_report(doc), sort_keys=True, indent=2) + "\n"
    golden_path = base / f"{name}.golden.json"
    if write:
        with resources.as_file(golden_path) as real:
            real.write_text(text, encoding="utf-8")
        return name, "written"
    try:
        golden = golden_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return name, "missing-golden"
    return name, "pass" if golden == text else "mismatch"


def _census_worker(name_write):
    return _census_entry_status(*name_write)


def _cmd_census(args) -> int:
    names = _census_names()
    if args.list:
        _emit({"entries": names})
        return 0
    if args.dump:
        if args.dump not in names:
            raise _Exit(2, f"unknown census entry {args.dump!r}; try --list")
        doc = json.loads(
            (_census_dir() / f"{args.dump}.diagram.json").read_text(encoding="utf-8")
        )
        _emit(doc)
        return 0
    work = [(name, args.write_golden) for name in names]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            statuses = list(pool.map(_census_worker, work))
    else:
        statuses = [_census_entry_status(*w) for w in work]
    doc = {
        "entries": [{"name": n, "status": s} for n, s in statuses],
        "verdict": "pass" if all(s in ("pass", "written") for _, s in statuses) else "fail",
    }
    _emit(doc)
    return 0 if doc["verdict"] == "pass" else 1


# -- argument wiring ---------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="graphhom",
        description="Link families and homology invariants of knotted graph diagrams",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram JSON document")
    p.add_argument("path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("family", help="enumerate the link family of a graph")
    p.add_argument("path")
    p.add_argument("--max-assignments", type=int, default=10**6)
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("invariants", help="classical polynomial invariants of a link")
    p.add_argument("path")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("khovanov", help="Khovanov homology of a link")
    p.add_argument("path")
    p.add_argument("--coeffs", choices=["z", "f2"], default="z")
    p.add_argument("--max-crossings", type=int, default=14)
    p.add_argument("--check-euler", action="store_true")
    p.set_defaults(func=_cmd_khovanov)

    p = sub.add_parser("floer", help="grid homology of a link or grid diagram")
    p.add_argument("path")
    p.add_argument("--max-grid", type=int, default=8)
    p.set_defaults(func=_cmd_floer)

    p = sub.add_parser("graph-homology", help="family direct-sum homology report")
    p.add_argument("path")
    p.add_argument("--floer", action="store_true")
    p.add_argument("--khovanov", action="store_true")
    p.add_argument("--coeffs", choices=["z", "f2"], default="z")
    p.add_argument("--max-grid", type=int, default=8)
    p.add_argument("--max-crossings", type=int, default=14)
    p.add_argument("--multiset", action="store_true")
    p.add_argument("--summary", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_graph_homology)

    p = sub.add_parser("moves", help="apply a seeded random move sequence")
    p.add_argument("path")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--kinds", default=None, help="comma-separated subset of R1..R5")
    p.set_defaults(func=_cmd_moves)

    p = sub.add_parser("census", help="run the bundled regression corpus")
    p.add_argument("--write-golden", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--list", action="store_true")
    p.add_argument("--dump", default=None, metavar="NAME")
    p.set_defaults(func=_cmd_census)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        _memory_guard()
        return args.func(args)
    except _Exit as exc:
        sys.stderr.write(exc.message + "\n")
        return exc.code
    except BrokenPipeError:
        return 0
    except GraphhomError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
