"""Capacity against absorption coefficient at a fixed 5 dB received SNR,
alongside the analytic bounds and both asymptotic limits.

    python3 scripts/absorption_sweep.py --trials 500
"""
from _common import parser, save, table

from reradmimo.experiments import ExperimentConfig, run_bounds, run_sweep
from reradmimo.output import BOUNDS_HEADER, atomic_write_text, render_csv


def main():
    args = parser(__doc__.splitlines()[0], trials=500).parse_args()
    cfg = ExperimentConfig().with_values(
        array__n_tx=64, array__n_rx=64, link__distance_m=10.0, medium__absorption_per_m=0.0,
        run__snr_convention="fixed_received_snr", run__snr_db=5.0, run__trials=args.trials,
        run__seed=args.seed, run__threads=args.threads,
        sweep__axis="absorption", sweep__spacing="log", sweep__start=1e-5, sweep__stop=1e3, sweep__points=17,
        bounds__n=64, bounds__snr_db=5.0, bounds__k_start=1e-3, bounds__k_stop=1e3, bounds__k_points=13,
        bounds__trials=min(args.trials, 200),
    )
    rows = run_sweep(cfg)
    save(rows, args.out / "absorption_sweep.csv")
    print(table(rows))
    b = run_bounds(cfg)
    atomic_write_text(args.out / "absorption_bounds.csv", render_csv(BOUNDS_HEADER, (
        (r.k_factor, r.k_factor_db, r.n, r.snr_db, r.upper_bound, r.lower_bound, r.lower_bound_se,
         r.limit_high_absorption, r.limit_no_absorption, r.lower_trials, r.lower_scale, r.seed) for r in b
    )))
    print(f"limits: high absorption {b[0].limit_high_absorption:.2f}, none {b[0].limit_no_absorption:.2f} bps/Hz")


if __name__ == "__main__":
    main()
