#!/usr/bin/env python3
"""Accuracy and shot cost versus circuit depth p at n = 10."""
import argparse
import sys

from modeqaoa.bench import main as bench_main


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--out", default="results/depth_sweep")
    parser.add_argument("--instances", type=int, default=10)
    parser.add_argument("--quick", action="store_true",
                        help="p in {1, 2}, 3 instances at n = 6")
    args = parser.parse_args()

    cmd = ["bench", "--experiment", "depth_sweep", "--seed", str(args.seed),
           "--out", args.out]
    if args.quick:
        cmd += ["--n-values", "6", "--p-values", "1", "2", "--instances", "3",
                "--t-max", "40"]
    else:
        cmd += ["--instances", str(args.instances)]
    return bench_main(cmd)


if __name__ == "__main__":
    sys.exit(main())
