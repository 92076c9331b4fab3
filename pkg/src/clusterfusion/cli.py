"""Command-line front end: ``clusterfusion <command> ...``.

Exit status is 0 when every requested check passes, 1 when a certification
fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .cartan import CartanError, build_cartan, info
from .cluster import (ClusterError, build_initial_seed, detect_kr, enumerate_category, export,
                      format_monomial, parse_monomial, quiver_dot, grid_arrows)
from .fusion import FusionError, fusion_ring, s_matrix
from .repring import RepRingElement, RepRingError, dim, kr_restriction, tensor
from .verifier import (VerificationError, check_dn, check_example_a2, check_example_b3, format_image,
                       parse_image, verify)
from .weyl import alcove_project

log = logging.getLogger("clusterfusion")


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _height(text: str | None) -> dict[int, int] | None:
    if text is None:
        return None
    vals = _ints(text)
    return {i + 1: v for i, v in enumerate(vals)}


def _emit(obj, args, text: str | None = None) -> None:
    out = json.dumps(obj, indent=1) if (args.json or text is None) else text
    if getattr(args, "out", None):
        Path(args.out).write_text(out + ("" if out.endswith("\n") else "\n"))
    else:
        print(out)


# -- ingestion ------------------------------------------------------------------

def ingest_table(path: str | Path) -> dict:
    """Validate a cluster-variable image table; returns {label: (index, monomial, image)}."""
    text = Path(path).read_text()
    if not text.strip():
        raise UsageError(f"{path}: empty file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from None
    for key in ("type", "k", "basis", "rows"):
        if key not in raw:
            raise UsageError(f"{path}: missing field {key!r}")
    datum = build_cartan(raw["type"])
    ring = fusion_ring(datum.name, raw["k"])
    if [tuple(w) for w in raw["basis"]] != ring.basis:
        raise UsageError(f"{path}: basis does not match P_k^+ of {datum.name} at level {raw['k']}")
    seen, out = set(), {}
    for row in raw["rows"]:
        if not isinstance(row, dict) or not {"index", "monomial", "image"} <= set(row):
            raise UsageError(f"{path}: rows need index, monomial and image")
        if row["index"] in seen:
            raise UsageError(f"{path}: duplicate index {row['index']}")
        seen.add(row["index"])
        try:
            mono = parse_monomial(row["monomial"])
            image = parse_image(row["image"], raw["basis"])
        except ValueError as exc:
            raise UsageError(f"{path}: row {row['index']}: {exc}") from None
        out[format_monomial(mono)] = (row["index"], mono, image)
    return {"type": datum.name, "k": raw["k"], "rows": out}


# -- commands ---------------------------------------------------------------------

def cmd_cartan(args) -> int:
    d = build_cartan(args.type)
    data = info(d)
    data["cartan_matrix"] = d.cartan_matrix.tolist()
    data["affine_matrix"] = d.affine_matrix.tolist()
    text = "\n".join(f"{k}: {v}" for k, v in data.items() if k not in ("cartan_matrix", "affine_matrix"))
    _emit(data, args, text)
    return 0


def cmd_project(args) -> int:
    d = build_cartan(args.type)
    w = _ints(args.weight)
    if len(w) != d.rank:
        raise UsageError(f"{d.name} weights have {d.rank} coordinates")
    res = alcove_project(d, w, args.k)
    out = {"sign": res.sign, "weight": list(res.weight) if res.sign else None}
    print(json.dumps(out, separators=(",", ":")))
    return 0


def cmd_fusion(args) -> int:
    ring = fusion_ring(build_cartan(args.type).name, args.k)
    if args.action == "basis":
        rows = [{"index": i, "weight": list(w), "qdim": ring.qdim(w)} for i, w in enumerate(ring.basis)]
        text = "\n".join(f"V_{r['index']} = {r['weight']}  qdim {r['qdim']:.6f}" for r in rows)
        _emit(rows, args, text)
    elif args.action == "mul":
        if len(args.weights) != 2:
            raise UsageError("fusion mul needs two affine weights")
        a, b = (ring.basis_element(_ints(w)) for w in args.weights)
        prod = ring.multiply(a, b)
        _emit({"product": [[list(w), c] for w, c in sorted(prod.terms.items())]}, args,
              format_image(prod, ring.basis))
    elif args.action == "qdim":
        if len(args.weights) != 1:
            raise UsageError("fusion qdim needs one affine weight")
        w = _ints(args.weights[0])
        ring.basis_element(w)
        _emit({"weight": list(w), "qdim": ring.qdim(w)}, args, f"{ring.qdim(w):.10f}")
    elif args.action == "smatrix":
        S = s_matrix(ring.datum, args.k, force=args.force)
        data = {"labels": [list(w) for w in S.labels],
                "re": S.entries.real.round(12).tolist(), "im": S.entries.imag.round(12).tolist()}
        _emit(data, args, "\n".join(" ".join(f"{x.real:+.6f}{x.imag:+.6f}j" for x in row) for row in S.entries))
    return 0


def cmd_rep(args) -> int:
    d = build_cartan(args.type)
    ws = [_ints(w) for w in args.weights]
    if args.action == "dim":
        _emit({"dim": [dim(d, w) for w in ws]}, args, " ".join(str(dim(d, w)) for w in ws))
    else:
        out = RepRingElement.one(d.rank)
        for w in ws:
            out = tensor(d, out, RepRingElement.irreducible(w))
        _emit({"terms": out.to_json()}, args, repr(out))
    return 0


def cmd_kr(args) -> int:
    d = build_cartan(args.type)
    res = kr_restriction(d, args.i, args.m)
    data = {"type": d.name, "i": args.i, "m": args.m, "restriction": res.to_json()}
    text = repr(res)
    if args.k:
        ring = fusion_ring(d.name, args.k)
        img = ring.phi_image(res)
        data["image"] = [[list(w), c] for w, c in sorted(img.terms.items())]
        text += "\nimage: " + format_image(img, ring.basis)
    _emit(data, args, text)
    return 0


def cmd_cluster(args) -> int:
    d = build_cartan(args.type)
    height = _height(args.height)
    if args.action == "init":
        seed, grid, inits = build_initial_seed(d, args.ell, height)
        if args.format == "dot":
            args.json = False
            _emit(None, args, quiver_dot(seed, grid).rstrip("\n"))
            return 0
        data = {"vertices": [{"id": j + 1, "point": list(pt), "label": format_monomial(inits[j]),
                              "frozen": j not in seed.exchangeable} for j, pt in enumerate(grid.points)],
                "arrows": [[list(a), list(b)] for a, b in grid_arrows(grid)]}
        text = "\n".join(f"x{v['id']} {tuple(v['point'])} {v['label']}{' [frozen]' if v['frozen'] else ''}"
                         for v in data["vertices"])
        _emit(data, args, text)
        return 0
    t0 = time.time()
    en = enumerate_category(d.name, args.ell, height, max_seeds=args.max_seeds, max_vars=args.max_vars)
    if args.action == "export":
        args.json = False
        _emit(None, args, export(en, args.format).rstrip("\n"))
        return 0
    kr, _ = detect_kr(en.registry, d)
    data = {"type": d.name, "ell": args.ell, "variables": len(en.registry),
            "exchangeable": len(en.registry.exchangeable_ids), "frozen": len(en.registry.frozen),
            "clusters": en.clusters, "relations": len(en.relations), "kr": len(kr),
            "seconds": round(time.time() - t0, 3)}
    _emit(data, args, ", ".join(f"{k} {v}" for k, v in data.items()))
    return 0


def cmd_verify(args) -> int:
    if args.k < 2:
        raise UsageError("verification needs level k >= 2")
    report = verify(args.type, args.k, source=args.seed_source, height=_height(args.height))
    if args.report == "md":
        args.json = False
        _emit(None, args, report.to_markdown().rstrip("\n"))
    elif args.report == "json" or args.json:
        args.json = True
        _emit(report.to_json(), args)
    else:
        lines = [report.summary(),
                 f"KR {len(report.kr_ids)}, known {report.known_initially}, unknown {report.unknown_initially}",
                 f"iterations {report.stats.iterations}",
                 f"frozen images invertible: {report.certificate.frozen_ok}",
                 f"relations hold: {report.sound}"]
        if report.table_match is not None:
            lines.append(f"matches reference table: {report.table_match}")
        lines += report.certificate.failures
        _emit(None, args, "\n".join(lines))
    return 0 if report.passed else 1


def cmd_examples(args) -> int:
    ok = True
    results = {}
    which = args.which or ["a2", "b3", "dn"]
    for name in which:
        if name in ("a2", "b3"):
            rep = check_example_a2() if name == "a2" else check_example_b3()
            results[name] = {"passed": rep.passed, "row_failures": rep.row_failures, "total_dim": rep.total_dim,
                             "null_rows": rep.null_rows, "negative_rows": rep.negative_rows,
                             "image": repr(rep.image), **{k: v for k, v in rep.extra.items()}}
            ok &= rep.passed
        elif name == "dn":
            for n in args.n:
                rep = check_dn(n)
                results[f"D{n}"] = rep.to_json()
                ok &= rep.consistent
        else:
            raise UsageError(f"unknown example {name!r}")
    _emit(results, args, "\n".join(f"{k}: {'consistent' if v.get('consistent', v.get('passed')) else 'FAILED'}"
                                   for k, v in results.items()))
    return 0 if ok else 1


def cmd_ingest(args) -> int:
    data = ingest_table(args.path)
    report = verify(data["type"], data["k"])
    labels = {format_monomial(lab): j for j, lab in enumerate(report.labels)}
    unmatched = [key for key in data["rows"] if key not in labels]
    differing = [key for key, (_, _, img) in data["rows"].items()
                 if key in labels and report.table.element(labels[key]) != img]
    result = {"type": data["type"], "k": data["k"], "rows": len(data["rows"]), "unmatched": unmatched,
              "differing": differing}
    _emit(result, args, f"{len(data['rows'])} rows, {len(unmatched)} unmatched, {len(differing)} differing")
    return 0 if not unmatched and not differing else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterfusion", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write output to this path")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cartan", parents=[common], help="Cartan data of a finite type")
    p.add_argument("type")
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("project", parents=[common], help="alcove projection of a finite weight at level k")
    p.add_argument("type")
    p.add_argument("k", type=int)
    p.add_argument("weight", help="comma-separated fundamental-weight coordinates")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("fusion", parents=[common], help="Verlinde ring operations")
    p.add_argument("action", choices=["basis", "mul", "qdim", "smatrix"])
    p.add_argument("type")
    p.add_argument("k", type=int)
    p.add_argument("weights", nargs="*", help="affine weights c0,c1,...")
    p.add_argument("--force", action="store_true", help="ignore the Weyl group size gate")
    p.set_defaults(func=cmd_fusion)

    p = sub.add_parser("rep", parents=[common], help="representation ring operations")
    p.add_argument("action", choices=["dim", "tensor"])
    p.add_argument("type")
    p.add_argument("weights", nargs="+")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("kr", parents=[common], help="KR module restriction")
    p.add_argument("action", choices=["restrict"])
    p.add_argument("type")
    p.add_argument("i", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--k", type=int, help="also project to level k")
    p.set_defaults(func=cmd_kr)

    p = sub.add_parser("cluster", parents=[common], help="initial seeds and finite-type enumeration")
    p.add_argument("action", choices=["init", "enumerate", "export"])
    p.add_argument("type")
    p.add_argument("ell", type=int)
    p.add_argument("--height", help="comma-separated height function on the unfolded nodes")
    p.add_argument("--format", choices=["dot", "json", "txt"], default="txt")
    p.add_argument("--max-seeds", type=int, default=10**6)
    p.add_argument("--max-vars", type=int, default=10**4)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", parents=[common], help="push C_{k-1} into the level-k Verlinde ring")
    p.add_argument("type")
    p.add_argument("k", type=int)
    p.add_argument("--seed-source", choices=["pipeline", "data"], default="pipeline")
    p.add_argument("--report", choices=["json", "md"])
    p.add_argument("--height")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", parents=[common], help="worked examples and the D_n formulas")
    p.add_argument("which", nargs="*", help="any of a2, b3, dn (default: all)")
    p.add_argument("--n", type=int, nargs="+", default=[4, 5, 6])
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("ingest", parents=[common], help="validate an image table against the pipeline")
    p.add_argument("path")
    p.set_defaults(func=cmd_ingest)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, CartanError, FusionError, ClusterError, RepRingError, ValueError) as exc:
        print(f"clusterfusion {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"clusterfusion {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
