#!/usr/bin/env python3
"""Robustness of both BO methods under global depolarizing noise at n = 10.

Optionally chains the probability-amplification stage after each adaptive
run (--stage2); traces are written to stage2_traces.jsonl.
"""
import argparse
import sys

from modeqaoa.bench import main as bench_main


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--out", default="results/noise_sweep")
    parser.add_argument("--instances", type=int, default=10)
    parser.add_argument("--stage2", action="store_true")
    parser.add_argument("--quick", action="store_true",
                        help="lambda in {0, 0.01}, 3 instances at n = 6")
    args = parser.parse_args()

    cmd = ["bench", "--experiment", "noise_sweep", "--seed", str(args.seed),
           "--out", args.out]
    if args.quick:
        cmd += ["--n-values", "6", "--lambdas", "0.0", "0.01",
                "--instances", "3", "--t-max", "40"]
    else:
        cmd += ["--instances", str(args.instances)]
    if args.stage2:
        cmd.append("--stage2")
    return bench_main(cmd)


if __name__ == "__main__":
    sys.exit(main())
