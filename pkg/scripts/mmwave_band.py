"""mmWave band (30-180 GHz) sweeps for a winter and a tropical atmosphere,
with re-radiation treated as noise and as scattering.

    python3 scripts/mmwave_band.py --trials 200 [--fixed-power]
"""
from _common import parser, save, table

from reradmimo.experiments import ExperimentConfig, run_sweep


def main():
    p = parser(__doc__.splitlines()[0], trials=200)
    p.add_argument("--fixed-power", action="store_true", help="150 mW transmit power instead of 15 dB received SNR")
    args = p.parse_args()
    convention = "fixed_transmit_power" if args.fixed_power else "fixed_received_snr"
    for mixture in ("high_latitude_winter", "tropics"):
        for mode in ("noise", "scattering"):
            cfg = ExperimentConfig().with_values(
                array__n_tx=64, array__n_rx=64, link__distance_m=10.0, link__tx_power_w=0.15,
                medium__mixture=mixture, run__mode=mode, run__snr_convention=convention, run__snr_db=15.0,
                run__trials=args.trials, run__seed=args.seed, run__threads=args.threads,
                sweep__axis="frequency", sweep__start=30e9, sweep__stop=180e9, sweep__points=31,
            )
            rows = run_sweep(cfg)
            save(rows, args.out / f"mmwave_{mixture}_{mode}.csv")
            print(f"{mixture}, {mode}")
            print(table(rows, "{:.4g}"))


if __name__ == "__main__":
    main()
