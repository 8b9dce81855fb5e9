"""Projector degrees and errors for every target on the fixture complexes."""

import argparse
import json
import math
from dataclasses import asdict, dataclass

from simplicial_walks.fixtures import named_complexes
from simplicial_walks.qsvt import PROJECTOR_DEGREE_CONSTANT, TARGETS, projector_encoding, projector_error


@dataclass
class Config:
    epsilons: str = "1e-3,1e-6"
    tier: str = "oracle"


def run(cfg: Config) -> dict:
    rows = []
    for name, X in named_complexes().items():
        for k in range(1, X.k_max + 1):
            if not X.count(k):
                continue
            for target in TARGETS:
                for eps in map(float, cfg.epsilons.split(",")):
                    enc = projector_encoding(X, k, target, eps, cfg.tier)
                    ratio = enc.degree_used * enc.lam / (enc.K * math.log(1 / eps)) if enc.degree_used else 0.0
                    rows.append({
                        "complex": name, "k": k, "target": target, "epsilon": eps,
                        "degree": enc.degree_used, "error": projector_error(X, k, enc), "degree_ratio": ratio,
                    })
    return {
        "config": asdict(cfg),
        "constant": PROJECTOR_DEGREE_CONSTANT,
        "max_degree_ratio": max(r["degree_ratio"] for r in rows),
        "max_error_over_eps": max(r["error"] / r["epsilon"] for r in rows),
        "rows": rows,
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    print(json.dumps(run(Config(**vars(ap.parse_args()))), indent=2))
