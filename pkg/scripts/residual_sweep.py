"""Largest distance from an integer among model structure constants, per k and precision."""

import argparse
import time

from fusionk.config import DOUBLE_PRECISION_MAX_K
from fusionk.matrix_model import build_model, structure_constants


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--precision", choices=("double", "multi", "auto", "both"), default="both")
    args = p.parse_args()
    modes = ("double", "multi") if args.precision == "both" else (args.precision,)
    print(f"auto path uses double precision for k <= {DOUBLE_PRECISION_MAX_K}")
    print(f"{'k':>3}  " + "  ".join(f"{m:>22}" for m in modes))
    for k in range(args.kmax + 1):
        model = build_model(k)
        cells = []
        for mode in modes:
            start = time.perf_counter()
            raw = structure_constants(model, mode)
            cells.append(f"{raw.max_residual():.2e} ({time.perf_counter() - start:6.2f} s)")
        print(f"{k:>3}  " + "  ".join(f"{c:>22}" for c in cells), flush=True)


if __name__ == "__main__":
    main()
