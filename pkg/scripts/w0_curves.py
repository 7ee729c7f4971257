"""Bound-route weight w0 against incoming energy for several driving strengths.

Reproduces the qualitative picture behind the weight diagnostic: w0 stays
small well below the one-quantum resonance and peaks once the effective
energy approaches the quasi-bound state.  Emits CSV to stdout or a file.

Usage:
    python scripts/w0_curves.py --g0 0.1 0.7 --e-min 0.1 --e-max 1.3 --steps 25
"""

import argparse
import sys

import numpy as np

from drivendelta import w0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--g0", type=float, nargs="+", default=[0.1, 0.7])
    parser.add_argument("--e-min", type=float, default=0.1)
    parser.add_argument("--e-max", type=float, default=1.3)
    parser.add_argument("--steps", type=int, default=25)
    parser.add_argument("--output", default=None)
    args = parser.parse_args(argv)

    grid = np.linspace(args.e_min, args.e_max, args.steps)
    lines = ["eps_i," + ",".join(f"w0_g{g:g}" for g in args.g0)]
    for eps in grid:
        vals = [w0(float(eps), g) for g in args.g0]
        lines.append(",".join(format(v, ".17g") for v in [float(eps)] + vals))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
