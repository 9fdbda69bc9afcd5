"""Check the trace identities for products of the order-3 elements A_x, A_x^T, B_x.

Exhaustive over all (x, y) for q <= 64, sampled beyond that.
"""
import argparse

from ekrdensity.psl2 import verify_trace_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("q", type=int, nargs="*", default=[4, 7, 13, 16, 19, 25, 31, 37, 43, 49, 61, 64, 79, 97])
    ap.add_argument("--samples", type=int, default=10**4)
    args = ap.parse_args()
    failed = 0
    for q in args.q:
        rep = verify_trace_table(q, samples=args.samples)
        mode = "sampled" if rep.sampled else "full"
        extra = "" if rep.b_entries else " (A entries only, char 2)"
        print(f"q={q:<4} mod {rep.modulus:<14} {mode:<7} {rep.checked:>7} checks  "
              f"{'ok' if rep.ok else 'MISMATCH'}{extra}")
        for m in rep.mismatches[:5]:
            print("   ", m)
        failed += not rep.ok
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
