"""``posetcoh`` command line.

Exit codes: 0 ok, 1 acceptance failure (``corpus`` only), 2 bad parameters,
3 invalid cocycle, 4 precondition failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path as FilePath

import numpy as np

from .algebra import NotAFactorError
from .cocycle import VALIDATE_TOL, Cocycle, CocycleError, matrix_from_json, validate
from .holonomy import RelationError, from_rep, holonomy_report
from .homotopy import PathFrame, build_path_frame, h1_invariants, presentation
from .poset import (
    Poset,
    PosetError,
    build_circle_poset,
    build_directed_interval_poset,
    build_graph_interval_poset,
    graph_from_json,
)
from .simplicial import SimplexError
from .splitting import JoinError, charge_component, join, split_join_roundtrip, topological_component

EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


# ---------------------------------------------------------------------------
# JSON with 17 significant digits


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize {x}")
    s = f"{x:.17g}"
    return s if any(c in s for c in ".en") else s + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """``json.dumps`` look-alike that writes every float with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, out):
    text = dumps(obj) + "\n"
    if out:
        FilePath(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else FilePath(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARAMS, f"cannot read {path}: {exc}")


# ---------------------------------------------------------------------------
# loaders


def _load_poset(path: str) -> Poset:
    data = _read_json(path)
    try:
        return Poset.from_json(data.get("poset", data))
    except (PosetError, KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARAMS, f"bad poset in {path}: {exc}")


def _load_cocycle(p: Poset, path: str, key: str) -> Cocycle:
    data = _read_json(path)
    if "values" not in data:
        if key not in data:
            raise CliError(EXIT_PARAMS, f"{path} has neither cocycle values nor a {key!r} entry")
        data = data[key]
    try:
        return Cocycle.from_json(p, data)
    except (CocycleError, KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARAMS, f"bad cocycle in {path}: {exc}")


def _frame(args, p: Poset) -> PathFrame:
    try:
        if args.frame:
            data = _read_json(args.frame)
            return PathFrame.from_json(p, data.get("frame", data))
        if not 0 <= args.pole < p.n:
            raise CliError(EXIT_PARAMS, f"pole {args.pole} is not an element (0..{p.n - 1})")
        return build_path_frame(p, args.pole)
    except (KeyError, TypeError) as exc:
        raise CliError(EXIT_PARAMS, f"bad frame: {exc}")
    except (PosetError, SimplexError, ValueError) as exc:
        raise CliError(EXIT_PRECONDITION, f"cannot build frame: {exc}")


def _require_valid(z: Cocycle, args):
    rep = validate(z, samples=args.samples, seed=args.seed, tol=args.tol)
    if not rep.valid:
        raise CliError(EXIT_INVALID, "invalid cocycle", {"error": "invalid cocycle", **rep.to_json()})
    return rep


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args):
    try:
        if args.model == "circle":
            p = build_circle_poset(args.n, args.max_len)
        elif args.model == "directed":
            p = build_directed_interval_poset(args.n)
        else:
            if not args.spec:
                raise CliError(EXIT_PARAMS, "build graph needs --spec")
            p = build_graph_interval_poset(graph_from_json(_read_json(args.spec)), args.max_len)
    except (PosetError, ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_PARAMS, str(exc))
    _emit(p.to_json(), args.out)


def cmd_validate(args):
    p = _load_poset(args.poset)
    z = _load_cocycle(p, args.cocycle, "cocycle")
    rep = validate(z, samples=args.samples, seed=args.seed, tol=args.tol)
    _emit(rep.to_json(), args.out)
    if not rep.valid:
        raise CliError(EXIT_INVALID, "invalid cocycle", {"error": "invalid cocycle", "offending": rep.offending})


def cmd_frame(args):
    p = _load_poset(args.poset)
    f = _frame(args, p)
    g = presentation(p, f)
    rank, torsion = h1_invariants(g)
    out = f.to_json()
    out["generators"] = {f"g{k}": f"{u},{l}" for k, (u, l) in enumerate(g.generator_pairs)}
    out["relations"] = g.to_text(p.labels)
    out["h1"] = {"rank": rank, "torsion": torsion}
    _emit(out, args.out)


def cmd_split(args):
    p = _load_poset(args.poset)
    z = _load_cocycle(p, args.cocycle, "cocycle")
    _require_valid(z, args)
    f = _frame(args, p)
    _emit(
        {
            "frame": f.to_json(),
            "charge": charge_component(z, f).to_json(),
            "topological": topological_component(z, f).to_json(),
            "roundtrip": split_join_roundtrip(z, f),
        },
        args.out,
    )


def cmd_join(args):
    p = _load_poset(args.poset)
    phi = _load_cocycle(p, args.phi, "topological")
    z = _load_cocycle(p, args.cocycle, "charge")
    _require_valid(phi, args)
    _require_valid(z, args)
    f = _frame(args, p)
    try:
        out = join(phi, z, f, tol=max(args.tol, 1e-8))
    except JoinError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc))
    _emit(out.to_json(), args.out)


def cmd_report(args):
    p = _load_poset(args.poset)
    z = _load_cocycle(p, args.cocycle, "cocycle")
    _require_valid(z, args)
    f = _frame(args, p)
    _emit(holonomy_report(z, f, max_word_len=args.max_word_len, samples=args.samples, seed=args.seed), args.out)


def cmd_from_rep(args):
    p = _load_poset(args.poset)
    f = _frame(args, p)
    g = presentation(p, f)
    data = _read_json(args.sigma)
    sigma = {}
    try:
        for key, m in data.items():
            if key.startswith("g"):
                k = int(key[1:])
                if not 0 <= k < len(g.generators):
                    raise CliError(EXIT_PARAMS, f"{key}: the presentation has {len(g.generators)} generators")
                key = g.generator_pairs[k]
            sigma[key] = matrix_from_json(m)
        z = from_rep(p, f, sigma, g, dim=args.dim)
    except RelationError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc))
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise CliError(EXIT_PARAMS, f"bad sigma: {exc}")
    _emit(z.to_json(), args.out)


def cmd_corpus(args):
    from .acceptance import run_all

    results = run_all(args.seed)
    for r in results:
        print(r.line())
    if args.out:
        _emit([{"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.seconds} for r in results], args.out)
    if not all(r.passed for r in results):
        raise CliError(EXIT_FAIL, "some acceptance criteria failed")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    common.add_argument("--tol", type=float, default=VALIDATE_TOL, help="validation tolerance")
    common.add_argument("--samples", type=int, default=1000, help="sampled general 2-simplices in validation")
    common.add_argument("--pole", type=int, default=0, help="pole element for the path frame")
    common.add_argument("--frame", help="frame JSON ({pole, tree}); overrides --pole")
    common.add_argument("--out", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="posetcoh", description="Cocycles, holonomy and splitting on finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="emit a model poset")
    b.add_argument("model", choices=["circle", "directed", "graph"])
    b.add_argument("--n", type=int, default=6, help="number of points (circle, directed)")
    b.add_argument("--max-len", type=int, default=2, help="longest arc / largest star")
    b.add_argument("--spec", help="graph JSON {\"edges\": [[u, v], ...]}")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("validate", parents=[common], help="check the cocycle identities")
    v.add_argument("--poset", required=True)
    v.add_argument("--cocycle", required=True)
    v.set_defaults(func=cmd_validate)

    fr = sub.add_parser("frame", parents=[common], help="path frame, generators and H1")
    fr.add_argument("--poset", required=True)
    fr.set_defaults(func=cmd_frame)

    s = sub.add_parser("split", parents=[common], help="charge and topological components")
    s.add_argument("--poset", required=True)
    s.add_argument("--cocycle", required=True)
    s.set_defaults(func=cmd_split)

    j = sub.add_parser("join", parents=[common], help="join a pole-valued cocycle with a trivial one")
    j.add_argument("--poset", required=True)
    j.add_argument("--phi", required=True, help="cocycle JSON, or split output (uses 'topological')")
    j.add_argument("--cocycle", required=True, help="cocycle JSON, or split output (uses 'charge')")
    j.set_defaults(func=cmd_join)

    r = sub.add_parser("report", parents=[common], help="holonomy algebra and characters")
    r.add_argument("--poset", required=True)
    r.add_argument("--cocycle", required=True)
    r.add_argument("--max-word-len", type=int, default=4)
    r.set_defaults(func=cmd_report)

    fr2 = sub.add_parser("from-rep", parents=[common], help="cocycle with prescribed generator holonomy")
    fr2.add_argument("--poset", required=True)
    fr2.add_argument("--sigma", required=True, help="JSON {\"g0\": matrix, ...} or {\"upper,lower\": matrix}")
    fr2.add_argument("--dim", type=int, help="matrix size when there are no generators")
    fr2.set_defaults(func=cmd_from_rep)

    c = sub.add_parser("corpus", parents=[common], help="run the acceptance checks")
    c.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0 or args.samples < 0:
        print(json.dumps({"error": "--tol must be positive and --samples non-negative"}), file=sys.stderr)
        return EXIT_PARAMS
    try:
        args.func(args)
    except CliError as exc:
        print(json.dumps(exc.payload or {"error": str(exc)}, default=str), file=sys.stderr)
        return exc.code
    except NotAFactorError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
