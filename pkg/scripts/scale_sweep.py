"""Run one config at several scales and print the report table.

    python3 scripts/scale_sweep.py configs/z2_star_z2.yaml --scales 2 4 8 --window 6

The window radius at scale d is ``window * d`` unless ``--radius`` fixes it.
Certificates go to ``--out-dir`` (default ``sweep/``).
"""

import argparse
import os
import sys

from coarsedim.cli import main as cli


def sweep(config, scales, window=6, radius=None, out_dir="sweep", cap=None):
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(config))[0]
    paths, code = [], 0
    for d in scales:
        out = os.path.join(out_dir, f"{stem}-d{d}.json")
        argv = ["run", "--config", config, "--out", out, "--scale", str(d),
                "--radius", str(radius if radius is not None else window * d)]
        if cap is not None:
            argv += ["--cap", str(cap)]
        rc = cli(argv)
        code = max(code, rc)
        if rc in (0, 1):
            paths.append(out)
    if paths:
        cli(["report", *paths, "--out", os.path.join(out_dir, f"{stem}.csv")])
    return code


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("config")
    p.add_argument("--scales", type=int, nargs="+", default=[2, 4, 8])
    p.add_argument("--window", type=int, default=6, help="radius per unit of scale")
    p.add_argument("--radius", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--out-dir", default="sweep")
    a = p.parse_args()
    sys.exit(sweep(a.config, a.scales, a.window, a.radius, a.out_dir, a.cap))
