"""Certified lower bounds on alpha_k, numeric and closed-form.

For each k the bracket [lower, upper] contains the root beta of G_k, and
alpha_k >= lower.  The closed-form bound beta_hat_k is weaker but only
needs the constant M.
"""
from expedit import beta_hat_analytic, beta_star, max_entropy_constant


def main():
    m = max_entropy_constant()
    print(f"M in [{m.lower:.10f}, {m.upper:.10f}]")
    print(f"{'k':>14} {'lower':>12} {'upper':>12} {'beta_hat':>10} evals")
    for k in (2, 3, 4, 8, 16, 32, 2**10, 2**20, 2**40):
        br = beta_star(k, 1e-8)
        hat = f"{beta_hat_analytic(k):.5f}" if k >= 3 else "-"
        print(f"{k:>14} {br.lower:>12.8f} {br.upper:>12.8f} {hat:>10} {br.sign_evals}")


if __name__ == "__main__":
    main()
