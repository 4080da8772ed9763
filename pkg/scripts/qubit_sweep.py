#!/usr/bin/env python3
"""Accuracy and shot cost versus qubit count, all three methods.

Full grid (n up to 12) takes a few minutes; pass --quick for a small smoke
run.  Results land in OUT/records.jsonl with aggregate CSVs alongside.
"""
import argparse
import sys

from modeqaoa.bench import main as bench_main


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--out", default="results/qubit_sweep")
    parser.add_argument("--instances", type=int, default=10)
    parser.add_argument("--quick", action="store_true",
                        help="n in {4, 6}, 3 instances")
    args = parser.parse_args()

    cmd = ["bench", "--experiment", "qubit_sweep", "--seed", str(args.seed),
           "--out", args.out]
    if args.quick:
        cmd += ["--n-values", "4", "6", "--instances", "3", "--t-max", "40"]
    else:
        cmd += ["--instances", str(args.instances)]
    return bench_main(cmd)


if __name__ == "__main__":
    sys.exit(main())
