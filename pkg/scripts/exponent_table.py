#!/usr/bin/env python3
"""Tabulate predicted exponents against the brute-force oracle over the
group catalog.  Usage: exponent_table.py [max_m] [shift]"""

import sys

from arrkit.arrangements import GroupSpec, multi_arrangement, predict_exponents
from arrkit.oracle import generator_degrees

CATALOG = ["G(2,1,2)", "G(3,1,2)", "G(4,1,2)", "G(2,2,2)", "G(3,3,2)",
           "G(4,4,2)", "G(4,2,2)", "G(6,2,2)", "G(6,3,2)", "G(2,1,3)",
           "G(2,2,3)", "G(3,3,3)"]


def main():
    max_m = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    shift = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    print(f"{'group':<10} {'m':>2} {'shift':>5}  {'predicted':<18} {'oracle':<18} verdict")
    for name in CATALOG:
        spec = GroupSpec.parse(name)
        for m in range(max_m + 1):
            predicted = predict_exponents(spec, m, shift)
            arrangement = multi_arrangement(spec, m, shift)
            report = generator_degrees(arrangement, predicted=predicted)
            oracle = sorted(report.degrees) if report.complete else ["?"]
            verdict = "MATCH" if oracle == predicted else "MISMATCH"
            print(f"{name:<10} {m:>2} {shift:>5}  {str(predicted):<18} "
                  f"{str(oracle):<18} {verdict}")


if __name__ == "__main__":
    main()
