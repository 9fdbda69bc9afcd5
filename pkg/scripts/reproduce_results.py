"""Recompute every published density value and write a results table.

    python3 scripts/reproduce_results.py --scale full --out results/
"""
import argparse
import json
from pathlib import Path

from ekrdensity.cli import verify_rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", choices=("quick", "full"), default="full")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()

    rows = verify_rows(args.scale, threads=args.threads)
    width = max(len(r.construction) for r in rows)
    for r in rows:
        flag = "ok " if r.match else "BAD"
        print(f"{flag} {r.construction:<{width}}  {r.quantity:<5} expected {str(r.expected):>4}  "
              f"got {str(r.computed):>4}  {r.runtime:7.2f}s")
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "results.json").write_text(json.dumps([r.to_dict() for r in rows], indent=2) + "\n")
    bad = sum(not r.match for r in rows)
    print(f"{len(rows) - bad}/{len(rows)} rows match")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
