"""Compare the lazy up/down expectation processes against their linear update rules.

For the up walk two rules are checked: the degree-free rule and the rule
divided by the common coface degree of an upper-regular complex.
"""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from simplicial_walks.fixtures import named_complexes, tetrahedron_boundary
from simplicial_walks.hodge import laplacians
from simplicial_walks.walk_markov import _up_degree, lazy_walk_matrix, expectation_process, lazy_walk_scaling


@dataclass
class Config:
    k: int = 1
    steps: int = 20


def _max_residual(X, k, P, p, U, steps):
    err = 0.0
    for start in X.basis(k):
        tr = expectation_process(P, start, steps, lazy_walk_scaling(P, p), p)
        for t in range(steps):
            err = max(err, float(np.max(np.abs(tr.normalized[t + 1] - U @ tr.normalized[t]))))
    return err


def run(cfg: Config) -> dict:
    k = cfg.k
    rows = []
    for name, X in (("K3", named_complexes()["K3"]), ("tetra", tetrahedron_boundary())):
        L = laplacians(X, k)
        I = np.eye(X.count(k))
        degrees = sorted({_up_degree(X, s) for s in X.basis(k)})
        M = max(_up_degree(X, f) for f in X.basis(k - 1))
        for p in (0.0, 0.25, 0.5):
            up = lazy_walk_matrix(X, k, "up_PS17", p)
            c = (1 - p) / (p * k + 1)
            row = {"complex": name, "p": p, "coface_degrees": degrees}
            row["up_degree_free"] = _max_residual(X, k, up, p, I - c * L.up, cfg.steps)
            if len(degrees) == 1:
                row["up_degree_normalized"] = _max_residual(X, k, up, p, I - c / degrees[0] * L.up, cfg.steps)
            if M >= 2:
                down = lazy_walk_matrix(X, k, "down_M16", p)
                U = I - (1 - p) / ((p * (M - 2) + 1) * (k + 1)) * L.down
                row["down"] = _max_residual(X, k, down, p, U, cfg.steps)
            rows.append(row)
    return {"config": asdict(cfg), "rows": rows}


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    print(json.dumps(run(Config(**vars(ap.parse_args()))), indent=2))
