"""c_j mod 4 over one or more periods, next to the f_j, g_j split."""

import argparse

from fusionk.closed_form import C_MOD4_PERIOD
from fusionk.polynomials import seq_c, seq_fg


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--jmax", type=int, default=23)
    args = p.parse_args()
    print(f"{'j':>4} {'j%8':>4} {'c_j':>12} {'c_j%4':>6} {'f_j':>12} {'g_j':>12}")
    mismatches = 0
    for j in range(args.jmax + 1):
        c = seq_c(j)
        f, g = seq_fg(j)
        flag = "" if c % 4 == C_MOD4_PERIOD[j % 8] else "  <- off pattern"
        mismatches += bool(flag)
        print(f"{j:>4} {j % 8:>4} {c:>12} {c % 4:>6} {f:>12} {g:>12}{flag}")
    print(f"period pattern {C_MOD4_PERIOD}; {mismatches} mismatches")


if __name__ == "__main__":
    main()
