"""Monte Carlo estimate of alpha_4(n) with both confidence intervals.

The first interval covers alpha_4(n) itself; the second widens it by the
convergence-rate term to cover the limit alpha_4.
"""
from expedit import ci_alpha_limit, ci_alpha_n, estimate_alpha_n


def main(k=4, N=400, seed=2024, lam=0.999):
    for n in (256, 512, 1024):
        s = estimate_alpha_n(k, n, N, seed=seed)
        a, b = ci_alpha_n(s, lam), ci_alpha_limit(s, lam)
        print(f"n={n:>5}  alpha~={s.alpha_tilde:.5f}  sd={s.sample_stddev:.2f}  "
              f"alpha_n in [{a.lower:.5f}, {a.upper:.5f}]  "
              f"alpha in [{b.lower:.5f}, {b.upper:.5f}]")


if __name__ == "__main__":
    main()
