"""Terahertz band (300-800 GHz) sweep: 225-element arrays, 1 m, 1 mW,
tropical atmosphere, re-radiation as scattering.

    python3 scripts/thz_band.py --trials 50
"""
from _common import parser, save, table

from reradmimo.experiments import ExperimentConfig, run_sweep


def main():
    args = parser(__doc__.splitlines()[0], trials=50).parse_args()
    cfg = ExperimentConfig().with_values(
        array__n_tx=225, array__n_rx=225, link__distance_m=1.0, link__tx_power_w=1e-3,
        medium__mixture="tropics", run__mode="scattering", run__trials=args.trials,
        run__seed=args.seed, run__threads=args.threads,
        sweep__axis="frequency", sweep__start=300e9, sweep__stop=800e9, sweep__points=51,
    )
    rows = run_sweep(cfg)
    save(rows, args.out / "thz_tropics.csv")
    print(table(rows, "{:.4g}"))


if __name__ == "__main__":
    main()
