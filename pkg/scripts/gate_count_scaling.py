"""Fit the growth exponent of circuit-tier primitive-operation counts in n."""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from simplicial_walks.walk_quantum import operation_count


@dataclass
class Config:
    n_min: int = 4
    n_max: int = 10
    k: int = 1
    precision: float = 1e-6


def run(cfg: Config) -> dict:
    ns = np.arange(cfg.n_min, cfg.n_max + 1)
    out = {"config": asdict(cfg), "kinds": {}}
    for kind in ("up", "down", "harmonic"):
        totals = [operation_count(int(n), cfg.k, kind, cfg.precision)["total"] for n in ns]
        slope = float(np.polyfit(np.log(ns), np.log(totals), 1)[0])
        out["kinds"][kind] = {"n": ns.tolist(), "total": totals, "exponent": slope}
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    print(json.dumps(run(Config(**vars(ap.parse_args()))), indent=2))
