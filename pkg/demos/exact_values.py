"""Exact expected edit distance for short binary strings.

Prints alpha_2(n) = E[ED(X, Y)] / n as a rational and a decimal, together
with the number of equivalence classes the computation had to visit.
"""
import time

from expedit import enumerate_classes, expected_distance_exact


def main(top=10):
    print(f"{'n':>3} {'classes':>8} {'alpha_2(n)':>12}  exact")
    for n in range(1, top + 1):
        t0 = time.time()
        _, alpha = expected_distance_exact(2, n)
        classes = sum(1 for _ in enumerate_classes(2, n))
        print(f"{n:>3} {classes:>8} {float(alpha):>12.7f}  {alpha}  ({time.time() - t0:.2f}s)")


if __name__ == "__main__":
    main()
