"""Coverage of the normalized Betti estimator over many seeds."""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from simplicial_walks.apps import estimate_normalized_betti
from simplicial_walks.fixtures import named_complexes


@dataclass
class Config:
    complex: str = "C4"
    k: int = 1
    epsilon: float = 0.1
    delta_sampler: float = 0.0
    runs: int = 200


def run(cfg: Config) -> dict:
    X = named_complexes()[cfg.complex]
    values = np.array([
        estimate_normalized_betti(X, cfg.k, cfg.epsilon, cfg.delta_sampler, seed=s, with_truth=False).value
        for s in range(cfg.runs)
    ])
    truth = estimate_normalized_betti(X, cfg.k, cfg.epsilon, seed=0).truth
    dev = np.abs(values - truth)
    return {
        "config": asdict(cfg),
        "truth": truth,
        "mean": float(values.mean()),
        "std": float(values.std()),
        "coverage": float(np.mean(dev <= cfg.epsilon + cfg.delta_sampler)),
        "max_deviation": float(dev.max()),
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    print(json.dumps(run(Config(**vars(ap.parse_args()))), indent=2))
