"""Relaxation functions phi(t) of the classical and fractional models.

The classical curves (Debye, Cole-Cole, Cole-Davidson) decay monotonically
from 1.  The fractional curves start from a t^(gamma-1) singularity; for
the Cole-Cole family with alpha > gamma they dip below zero, which is the
visible sign that complete monotonicity is lost.

    python figures/relaxation_functions.py --out-dir figures/data --plot
"""

from _runner import parse_args, plot_curves, run_all

LINEAR = ["--grid-lin", "0:5:201"]
POSITIVE = ["--grid-lin", "0.01:5:200"]

JOBS = [("debye", ["eval", "--kind", "D", *LINEAR])]
JOBS += [(f"cole_cole_a{a}", ["eval", "--kind", "CC", "--alpha", a, *LINEAR]) for a in ("0.4", "0.6", "1")]
JOBS += [(f"cole_davidson_b{b}", ["eval", "--kind", "CD", "--beta", b, *LINEAR]) for b in ("0.4", "0.6", "1")]
JOBS += [(f"debye_frac_g{g}", ["eval", "--kind", "DF", "--gamma", g, *POSITIVE]) for g in ("0.3", "0.9")]
JOBS += [
    (f"cole_cole_frac_a{a}_g{g}", ["eval", "--kind", "CCF", "--alpha", a, "--gamma", g, *POSITIVE])
    for g in ("0.4", "0.7")
    for a in ("0.3", "0.7", "0.9")
]
JOBS += [
    (f"cole_davidson_frac_b{b}_g{g}", ["eval", "--kind", "CDF", "--beta", b, "--gamma", g, *POSITIVE])
    for b, g in (("0.5", "0.5"), ("0.3", "0.9"))
]

GROUPS = {
    "classical": ["debye", "cole_cole_a0.4", "cole_cole_a0.6", "cole_davidson_b0.4", "cole_davidson_b0.6"],
    "fractional_debye": ["debye_frac_g0.3", "debye_frac_g0.9"],
    "fractional_cole_cole_g0.4": ["cole_cole_frac_a0.3_g0.4", "cole_cole_frac_a0.7_g0.4", "cole_cole_frac_a0.9_g0.4"],
    "fractional_cole_cole_g0.7": ["cole_cole_frac_a0.3_g0.7", "cole_cole_frac_a0.7_g0.7", "cole_cole_frac_a0.9_g0.7"],
    "fractional_cole_davidson": ["cole_davidson_frac_b0.5_g0.5", "cole_davidson_frac_b0.3_g0.9"],
}

if __name__ == "__main__":
    args = parse_args(__doc__.splitlines()[0])
    paths = run_all(JOBS, args.out_dir, args.dry_run)
    if args.plot and not args.dry_run:
        plot_curves(paths, GROUPS, "t", "phi", args.out_dir)
