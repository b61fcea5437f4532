"""``coarsedim`` command line.

Exit codes: 0 pass, 1 verification or hypothesis failure, 2 bad input,
3 resource cap or window exhaustion.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import yaml

from . import certificate as certs
from .covers import verify_cover
from .errors import CoarseDimError, InputError
from .groups import group_from_spec, load_spec_text
from .trees import build_bass_serre, tree_cover, validate_tree

REPORT_COLUMNS = ["group", "pipeline", "d", "colors", "max_diameter", "verdict"]


def _load_group(path):
    try:
        with open(path) as fh:
            spec = load_spec_text(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise InputError(f"{path} is not valid YAML: {exc}") from None
    return group_from_spec(spec)


def cmd_run(args):
    cfg = certs.RunConfig.load(args.config)
    for key in ("scale", "radius", "cap"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    cert, result = certs.execute(cfg)
    out = args.out or os.path.splitext(args.config)[0] + ".cert.json"
    certs.write_atomic(out, certs.dumps(cert))
    v = cert["verdicts"]
    status = "PASS" if v["passed"] else "FAIL"
    print(f"{status} {cert['pipeline']} d={cfg.scale} radius={cfg.radius} "
          f"colors={cert['params']['colors']} max_diameter={v['max_diameter']} "
          f"bound={v['bound']} -> {out}")
    return 0 if v["passed"] else 1


def _verify_one(path):
    try:
        res = certs.verify_certificate(certs.load(path))
    except CoarseDimError as exc:
        return path, None, [str(exc)], exc.exit_code
    return path, res.passed, res.problems, 0 if res.passed else 1


def cmd_verify(args):
    if args.jobs > 1 and len(args.certificates) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(_verify_one, args.certificates))
    else:
        outcomes = [_verify_one(p) for p in args.certificates]
    code = 0
    for path, passed, problems, c in outcomes:
        print(f"{'PASS' if passed else 'FAIL'} {path}")
        for msg in problems:
            print(f"  {msg}")
        code = max(code, c)
    return code


def group_name(cert):
    if cert.get("label"):
        return cert["label"]
    G = group_from_spec(cert["group"])
    return f"{G.kind}({','.join(G.labels)})"


def report_rows(paths):
    rows = []
    for path in paths:
        cert = certs.load(path)
        v = cert.get("verdicts") or {}
        rows.append({
            "group": group_name(cert),
            "pipeline": cert.get("pipeline"),
            "d": cert["params"]["d"],
            "colors": cert["params"]["colors"],
            "max_diameter": v.get("max_diameter"),
            "verdict": "PASS" if v.get("passed") else "FAIL",
        })
    return rows


def format_table(rows):
    cells = [REPORT_COLUMNS] + [[str(r[c]) for c in REPORT_COLUMNS] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(REPORT_COLUMNS))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def cmd_report(args):
    rows = report_rows(args.certificates)
    sys.stdout.write(format_table(rows))
    if args.out:
        if args.out.endswith(".csv"):
            buf = io.StringIO()
            w = csv.DictWriter(buf, REPORT_COLUMNS, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
            text = buf.getvalue()
        else:
            text = json.dumps(rows, indent=1) + "\n"
        certs.write_atomic(args.out, text)
    return 0


def cmd_ball(args):
    G = _load_group(args.config)
    radius = 4 if args.radius is None else args.radius
    sizes = G.sphere_sizes(radius, cap=args.cap)
    total = 0
    print("r  sphere  ball")
    for r, n in enumerate(sizes):
        total += n
        print(f"{r}  {n}  {total}")
    return 0


def cmd_reduce(args):
    G = _load_group(args.config)
    for text in args.words:
        x = G.parse(text)
        print(f"{G.fmt(x)}\t{G.norm(x)}")
    return 0


def tree_document(t):
    bs = t.structure
    parent = {}
    for u, v in t.edges:
        parent[v] = u
    verts = sorted(t.vertices, key=lambda v: (t.weight[v], bs.key_text(v)))
    return {
        "root": bs.key_text(t.root),
        "vertices": [{"key": bs.key_text(v), "weight": t.weight[v],
                      "parent": bs.key_text(parent[v]) if v in parent else None,
                      "boundary": v in t.boundary} for v in verts],
    }


def cmd_tree(args):
    G = _load_group(args.config)
    depth = 3 if args.radius is None else args.radius
    t = build_bass_serre(G, depth)
    rep = validate_tree(t)
    print(f"tree slice depth={depth} vertices={len(t.vertices)} edges={len(t.edges)} "
          f"valid={rep.passed}")
    code = 0 if rep.passed else 1
    if args.scale is not None:
        cover = tree_cover(t, t.root, args.scale)
        cover.scale = args.scale + 1
        crep = verify_cover(cover)
        print(f"tree cover r={args.scale} colors={crep.colors} max_diameter={crep.max_diameter} "
              f"bound={crep.bound} verified={crep.passed}")
        code = max(code, 0 if crep.passed else 1)
    if args.out:
        doc = tree_document(t)
        doc["group"] = G.to_spec()
        certs.write_atomic(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return code


def build_parser():
    p = argparse.ArgumentParser(prog="coarsedim",
                                description="Verified asymptotic dimension covers of group windows.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, metavar="PATH",
                        help="run config, or a bare group spec for ball/reduce/tree")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--scale", type=int, metavar="N")
        sp.add_argument("--radius", type=int, metavar="N")
        sp.add_argument("--cap", type=int, metavar="N")
        sp.add_argument("--jobs", type=int, default=1, metavar="N")

    run = sub.add_parser("run", help="run a pipeline and write a certificate")
    common(run)
    run.set_defaults(func=cmd_run)
    ver = sub.add_parser("verify", help="re-check certificates from scratch")
    ver.add_argument("certificates", nargs="+")
    common(ver, config_required=False)
    ver.set_defaults(func=cmd_verify)
    rep = sub.add_parser("report", help="one summary row per certificate")
    rep.add_argument("certificates", nargs="+")
    common(rep, config_required=False)
    rep.set_defaults(func=cmd_report)
    ball = sub.add_parser("ball", help="sphere and ball sizes")
    common(ball)
    ball.set_defaults(func=cmd_ball)
    red = sub.add_parser("reduce", help="canonical form and norm of words")
    red.add_argument("words", nargs="+")
    common(red)
    red.set_defaults(func=cmd_reduce)
    tree = sub.add_parser("tree", help="Bass-Serre tree slice (--radius is the depth)")
    common(tree)
    tree.set_defaults(func=cmd_tree)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CoarseDimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
