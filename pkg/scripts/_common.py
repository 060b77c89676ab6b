"""Shared helpers for the experiment scripts."""
import argparse
from pathlib import Path

from reradmimo.output import atomic_write_text, results_csv


def parser(description: str, trials: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("results"))
    return p


def save(rows, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write_text(path, results_csv(rows))
    print(f"wrote {path} ({len(rows)} rows)")


def table(rows, value_fmt="{:.3g}") -> str:
    """Compact sweep_value x scheme table of mean capacities."""
    schemes = list(dict.fromkeys(r.scheme for r in rows))
    values = list(dict.fromkeys(r.sweep_value for r in rows))
    cap = {(r.sweep_value, r.scheme): r.capacity_mean for r in rows}
    lines = ["value".rjust(10) + "".join(s.rjust(10) for s in schemes)]
    for v in values:
        lines.append(value_fmt.format(v).rjust(10) + "".join(f"{cap[v, s]:10.2f}" for s in schemes))
    return "\n".join(lines)
