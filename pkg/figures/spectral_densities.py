"""Spectral densities K(r) on a log grid in r.

Prabhakar (ML3) and Havriliak-Negami densities stay positive.  The
Cole-Davidson density vanishes for r <= 1.  The fractional Cole-Cole
density turns negative once alpha exceeds gamma, and the fractional
Havriliak-Negami density does so at small r.

    python figures/spectral_densities.py --out-dir figures/data --plot
"""

from _runner import parse_args, plot_curves, run_all

LOG = ["--grid-log", "0.01:100:300"]
SMALL_R = ["--grid-log", "1e-6:10:300"]

JOBS = [
    (f"ml3_a{a}_l{lam}", ["spectrum", "--kind", "ML3", "--alpha", a, "--lambda", lam, *LOG])
    for a, lam in (("0.5", "0.5"), ("0.5", "0.9"), ("0.3", "0.5"), ("0.8", "0.5"))
]
JOBS += [(f"cole_davidson_b{b}", ["spectrum", "--kind", "CD", "--beta", b, *LOG]) for b in ("0.3", "0.5", "0.8")]
JOBS += [
    (f"havriliak_negami_a{a}_b{b}", ["spectrum", "--kind", "HN", "--alpha", a, "--beta", b, *LOG])
    for a, b in (("0.3", "0.3"), ("0.3", "0.8"), ("0.8", "0.3"), ("0.8", "0.8"))
]
JOBS += [
    (f"cole_cole_frac_a{a}_g{g}", ["spectrum", "--kind", "CCF", "--alpha", a, "--gamma", g, *LOG])
    for a, g in (("0.4", "0.6"), ("0.6", "0.6"), ("0.9", "0.4"))
]
JOBS += [
    (f"havriliak_negami_frac_a{a}_b{b}_g{g}", ["spectrum", "--kind", "HNF", "--alpha", a, "--beta", b, "--gamma", g, *SMALL_R])
    for a, b, g in (("0.4", "0.5", "0.7"), ("0.8", "0.5", "0.3"))
]
JOBS += [
    (f"stretched_exp_g{g}", ["spectrum", "--kind", "KilbasSaigo", "--gamma", g, *LOG]) for g in ("0.3", "0.5", "0.9")
]

GROUPS = {
    "ml3": [name for name, _ in JOBS if name.startswith("ml3")],
    "cole_davidson": [name for name, _ in JOBS if name.startswith("cole_davidson")],
    "havriliak_negami": [name for name, _ in JOBS if name.startswith("havriliak_negami_a")],
    "cole_cole_frac": [name for name, _ in JOBS if name.startswith("cole_cole_frac")],
    "havriliak_negami_frac": [name for name, _ in JOBS if name.startswith("havriliak_negami_frac")],
    "stretched_exp": [name for name, _ in JOBS if name.startswith("stretched_exp")],
}

if __name__ == "__main__":
    args = parse_args(__doc__.splitlines()[0])
    paths = run_all(JOBS, args.out_dir, args.dry_run)
    if args.plot and not args.dry_run:
        plot_curves(paths, GROUPS, "r", "K", args.out_dir, logx=True)
