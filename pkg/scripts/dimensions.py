"""Perron-Frobenius dimensions of the distinguished objects and the multiplicativity residual."""

import argparse

from fusionk.fusion_ring import dimension_summary, pfdim, verify_dimension
from fusionk.graphs import chain_length
from fusionk.matrix_model import build_model, fusion_table


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--kmax", type=int, default=10)
    args = p.parse_args()
    print(f"{'k':>3} {'d(alpha1)':>12} {'d(beta3)':>12} {'d(f)':>12} {'d(g)':>12} "
          f"{'global dim':>14} {'residual':>10}")
    for k in range(args.kmax + 1):
        table = fusion_table(build_model(k))
        d = pfdim(k)
        get = lambda lab: d[table.index(lab)]
        glob = next(iter(dimension_summary(table).values()))
        res = verify_dimension(table).value
        print(f"{k:>3} {get('alpha1'):12.6f} {get('beta3'):12.6f} {get('f'):12.6f} {get('g'):12.6f} "
              f"{glob:14.4f} {res:10.1e}   (chain length {chain_length(k)})", flush=True)


if __name__ == "__main__":
    main()
