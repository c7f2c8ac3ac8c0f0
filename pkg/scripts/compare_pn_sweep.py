"""Compare small_I against the closed-form J of P^n over a grid of bounds.

    python3 scripts/compare_pn_sweep.py --max-n 4 --max-bound 3 --max-t 2
"""

import argparse
import time

from toricq.cli import compare_series
from toricq.fan import projective_space
from toricq.givental import closed_form_J_Pn, make_request, small_I


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--max-bound", type=int, default=3)
    p.add_argument("--max-t", type=int, default=2)
    args = p.parse_args()

    bad = 0
    print(f"{'n':>2} {'bound':>5} {'t':>2} {'coeffs':>7} {'diffs':>5} {'sec':>6}")
    for n in range(1, args.max_n + 1):
        f = projective_space(n)
        for bound in range(args.max_bound + 1):
            for tt in range(args.max_t + 1):
                start = time.perf_counter()
                req = make_request(f, degree_bound=bound, t_trunc=tt)
                diffs, total = compare_series(small_I(req), closed_form_J_Pn(n, bound, tt, fan=f, A=req.A))
                bad += len(diffs)
                print(f"{n:>2} {bound:>5} {tt:>2} {total:>7} {len(diffs):>5} {time.perf_counter() - start:>6.2f}")
    print("identical" if not bad else f"{bad} mismatching coefficients")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
