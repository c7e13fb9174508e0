"""Where the fractional densities stay nonnegative, and CM verdicts.

Sign maps over (alpha, gamma) for the fractional Cole-Cole density and,
at a few fixed beta, for the fractional Havriliak-Negami density.  The
cm-check runs record which fractional functions fail complete
monotonicity and where the witness sits.

    python figures/sign_regions.py --out-dir figures/data
"""

from _runner import parse_args, run_all

JOBS = [("region_cole_cole_frac", ["region-map", "--kind", "CCF", "--axes", "alpha,gamma", "--steps", "9x9"])]
JOBS += [
    (f"region_havriliak_negami_frac_b{b}", ["region-map", "--kind", "HNF", "--beta", b, "--axes", "alpha,gamma", "--steps", "9x9"])
    for b in ("0.3", "0.5", "0.8")
]
JOBS += [
    ("cm_debye_frac_g0.3", ["cm-check", "--kind", "DF", "--gamma", "0.3"]),
    ("cm_cole_cole_frac_a0.9_g0.4", ["cm-check", "--kind", "CCF", "--alpha", "0.9", "--gamma", "0.4"]),
    ("cm_cole_cole_frac_a0.4_g0.7", ["cm-check", "--kind", "CCF", "--alpha", "0.4", "--gamma", "0.7"]),
    ("cm_havriliak_negami_a0.5_b0.5", ["cm-check", "--kind", "HN", "--alpha", "0.5", "--beta", "0.5"]),
    ("reductions", ["reduce-check"]),
]

if __name__ == "__main__":
    args = parse_args(__doc__.splitlines()[0])
    run_all(JOBS, args.out_dir, args.dry_run)
