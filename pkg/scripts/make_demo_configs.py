#!/usr/bin/env python3
"""Regenerate the bundled demo configuration files from the named fixtures."""

import json
from pathlib import Path

from greybox_stability import fixtures
from greybox_stability.cli import config_doc
from greybox_stability.synthetic import SUITE_PLAN

OUT = Path(__file__).resolve().parents[1] / "src" / "greybox_stability" / "demo"


def write(name: str, doc: dict) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {path}")


def main() -> None:
    stable, unstable = fixtures.simulation_like_pair()
    write("stable.json", config_doc(stable.grid, SUITE_PLAN, device=stable.device))
    write("unstable.json", config_doc(unstable.grid, SUITE_PLAN, device=unstable.device))

    trio = fixtures.experiment_like_trio()
    write(
        "experiment_cs.json",
        config_doc(
            trio[0].grid,
            fixtures.EXPERIMENT_PLAN,
            scenarios=tuple((s.name, s.device, s.grid) for s in trio),
        ),
    )

    wind = fixtures.wind_batch_five()
    write(
        "batch_wind.json",
        config_doc(
            wind[0].grid,
            SUITE_PLAN,
            scenarios=tuple((s.name, s.device, None) for s in wind),
        ),
    )

    system = fixtures.near_critical_interval_system()
    write("near_critical.json", config_doc(system.grid, SUITE_PLAN, device=system.device))


if __name__ == "__main__":
    main()
