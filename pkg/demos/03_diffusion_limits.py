"""Empirical diffusion limits.

Each experiment compares the dynamical-boundary solution against one of
its limit problems while a parameter runs down (or up) a geometric
ladder, then fits the error in log-log coordinates.  The measured slopes
reproduce the analytic rates.
"""

from dynheat import run_limit

MENU = [
    ("eps_to_0", "fast bulk: parabolic problem -> harmonic dynamic problem"),
    ("k_to_0", "weak surface diffusion -> non-diffusive dynamical condition"),
    ("delta_to_0", "small capacity -> diffusive Neumann condition"),
    ("delta_to_inf", "large capacity -> frozen Dirichlet data"),
    ("k_to_inf_theta", "joint large diffusivity at fixed ratio"),
    ("k_to_inf_fp", "large diffusivity, integrable data (power law)"),
    ("k_to_inf_fp_log", "threshold index: power law with log correction"),
    ("ldd_delta_to_inf", "plain limit: harmonic dynamic -> harmonic extension"),
    ("eps_to_inf", "plain limit: slow bulk freezes the interior data"),
]

for which, story in MENU:
    res = run_limit(which)
    print(f"{which:>18}: {story}")
    for h, e in res.table:
        print(f"{'':>20}ladder {h:<10g} sup error {e:.4e}")
    print(f"{'':>20}{res.detail}  [{'ok' if res.passed else 'FAILED'}]\n")
