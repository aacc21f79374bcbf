#!/usr/bin/env python3
"""Least-squares fit of an experiment CSV metric against a function of n.

Usage: fit_scaling.py CSV --stage separator --metric weight [--x log2n|log2n2|n]

Aggregates the metric by median over (seed, trial) per n, fits
value = slope * x(n) + intercept, and prints slope, intercept, and r^2.
"""
import argparse
import csv
import math
import statistics
import sys


def xform(name, n):
    if name == "log2n":
        return math.log2(n)
    if name == "log2n2":
        return math.log2(n) ** 2
    if name == "n":
        return float(n)
    raise SystemExit(f"unknown x transform: {name}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--stage", required=True)
    ap.add_argument("--metric", required=True)
    ap.add_argument("--x", default="log2n")
    args = ap.parse_args()

    by_n = {}
    with open(args.csv, newline="") as f:
        for row in csv.DictReader(f):
            if row["stage"] != args.stage or row["metric"] != args.metric:
                continue
            if row["status"] != "ok":
                continue
            by_n.setdefault(int(row["n"]), []).append(float(row["value"]))
    if len(by_n) < 2:
        raise SystemExit("need at least two n values with ok rows")

    pts = [(xform(args.x, n), statistics.median(vs)) for n, vs in sorted(by_n.items())]
    k = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    denom = k * sxx - sx * sx
    slope = (k * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / k
    ss_res = sum((y - slope * x - intercept) ** 2 for x, y in pts)
    mean_y = sy / k
    ss_tot = sum((y - mean_y) ** 2 for _, y in pts)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    print(f"slope {slope:.6g} intercept {intercept:.6g} r2 {r2:.6g} points {k}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
