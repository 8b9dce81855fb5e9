"""End-to-end acceptance suite: one test per criterion, one PASS/FAIL line each.

Run ``python3 tests/test_acceptance.py`` for the summary alone; under pytest
the lines are printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from simplicial_walks.apps import (
    estimate_normalized_betti,
    estimate_normalized_persistent_betti,
    verify_promise_homology,
)
from simplicial_walks.complex_core import build_clique_complex
from simplicial_walks.fixtures import complete_graph, cycle_graph, named_complexes, random_graph, tetrahedron_boundary
from simplicial_walks.hodge import _combinatorial_laplacians, boundary_matrix, laplacians
from simplicial_walks.qsvt import (
    DEGREE_CONSTANT,
    PROJECTOR_DEGREE_CONSTANT,
    TARGETS,
    Orientation,
    check_rectangle,
    projector_encoding,
    projector_error,
    rectangle_polynomial,
)
from simplicial_walks.walk_markov import lazy_walk_matrix, expectation_process, lazy_walk_scaling, transition_matrix
from simplicial_walks.walk_quantum import laplacian_block, operation_count, walk_unitary

TIME_LIMIT = 60.0
KINDS = ("up", "down", "harmonic")
LAP = {"up": "up", "down": "down", "harmonic": "full"}
RESULTS: dict[int, tuple[bool, str, float]] = {}


def _cases(X):
    return [k for k in range(1, X.k_max + 1) if X.count(k)]


def criterion_1():
    rng = np.random.default_rng(2024)
    worst_lap = worst_dd = worst_spec = 0.0
    for _ in range(50):
        n = int(rng.integers(3, 9))
        X = build_clique_complex(random_graph(n, float(rng.uniform(0.3, 0.9)), rng, (0.1, 1.0)))
        for k in range(0, X.k_max + 1):
            # laplacians() also compares the two forms; recompute the gap here to report it
            L = laplacians(X, k, check_tol=np.inf)
            cu, cd, cf = _combinatorial_laplacians(X, k)
            worst_lap = max(worst_lap, *(float(np.max(np.abs(a - b), initial=0)) for a, b in ((L.up, cu), (L.down, cd), (L.full, cf))))
            prod = boundary_matrix(X, k).entries @ boundary_matrix(X, k + 1).entries if k >= 1 else np.zeros(0)
            worst_dd = max(worst_dd, float(np.max(np.abs(prod), initial=0)))
            signs = rng.choice([-1.0, 1.0], size=X.count(k))
            e1 = np.sort(np.linalg.eigvalsh(L.full))
            e2 = np.sort(np.linalg.eigvalsh(signs[:, None] * L.full * signs[None, :]))
            worst_spec = max(worst_spec, float(np.max(np.abs(e1 - e2), initial=0)))
    ok = worst_lap <= 1e-12 and worst_dd <= 1e-12 and worst_spec <= 1e-9
    return ok, f"laplacian gap {worst_lap:.1e}, boundary^2 {worst_dd:.1e}, spectrum shift {worst_spec:.1e}"


def criterion_2():
    worst = 0.0
    fx = named_complexes()
    for X in fx.values():
        for k in _cases(X):
            for kind in KINDS:
                enc = laplacian_block(X, k, kind, "oracle")
                L = getattr(laplacians(X, k), LAP[kind])
                K = transition_matrix(X, k, kind).K
                # K = 0 only when no simplex has a coface; the Laplacian and the block both vanish
                target = L / (math.sqrt(2) * K) if K > 0 else np.zeros_like(L)
                worst = max(worst, float(np.max(np.abs(enc.block - target))))
    k3 = laplacian_block(fx["K3"], 1, "harmonic").block
    k3_err = float(np.max(np.abs(k3 - 3 / (5 * math.sqrt(2)) * np.eye(3))))
    return worst <= 1e-10 and k3_err <= 1e-10, f"max block error {worst:.1e}, K3 check {k3_err:.1e}"


def criterion_3():
    rng = np.random.default_rng(7)
    graphs = [complete_graph(n) for n in range(3, 8)] + [cycle_graph(n) for n in range(4, 8)]
    graphs += [random_graph(int(rng.integers(4, 8)), 0.7, rng) for _ in range(6)]
    exact_worst = 0.0
    ratio_worst = 0.0
    for g in graphs:
        X = build_clique_complex(g)
        for k in [k for k in _cases(X) if k <= 3]:
            for kind in KINDS:
                W = walk_unitary(X, k, kind, "circuit")
                exact_worst = max(exact_worst, W.encoding.err)
                for delta in (1e-3, 1e-6):
                    Wd = walk_unitary(X, k, kind, "circuit", prep_err=delta, seed=11)
                    ratio_worst = max(ratio_worst, Wd.encoding.err / delta)
    ns = np.arange(4, 11)
    slopes = {}
    for kind in KINDS:
        totals = [operation_count(int(n), 1, kind, 1e-6)["total"] for n in ns]
        slopes[kind] = float(np.polyfit(np.log(ns), np.log(totals), 1)[0])
    ok = exact_worst <= 1e-10 and ratio_worst <= 10 and all(abs(s - 2) <= 0.3 for s in slopes.values())
    fit = ", ".join(f"{k} {v:.2f}" for k, v in slopes.items())
    return ok, f"exact {exact_worst:.1e}, worst err/delta {ratio_worst:.2f}, exponents {fit}"


def criterion_4():
    worst_ratio = 0.0
    failures = 0
    count = 0
    for t in (0.1, 0.3, 0.5, 0.8):
        for delta in (0.02, 0.05, 0.1):
            if not (delta < t and t + delta <= 1):
                continue
            for eps in (1e-2, 1e-4, 1e-8):
                for orientation in Orientation:
                    P = rectangle_polynomial(t, delta, eps, orientation)
                    rep = check_rectangle(P)
                    count += 1
                    failures += not all(rep[key] for key in ("bounded", "even", "high_band", "low_band"))
                    worst_ratio = max(worst_ratio, P.degree * delta / math.log(1 / eps))
    ok = failures == 0 and worst_ratio <= DEGREE_CONSTANT
    return ok, f"{count} polynomials, {failures} band failures, max degree*delta/ln(1/eps) {worst_ratio:.2f} (C = {DEGREE_CONSTANT})"


def criterion_5():
    tetra = tetrahedron_boundary()
    fx = named_complexes()
    cases = [(fx["C4"], 1), (fx["K3"], 1), (tetra, 1), (tetra, 2)]
    worst_err_ratio = worst_deg = 0.0
    for X, k in cases:
        for target in TARGETS:
            for eps in (1e-3, 1e-6):
                enc = projector_encoding(X, k, target, eps)
                worst_err_ratio = max(worst_err_ratio, projector_error(X, k, enc) / eps)
                if enc.degree_used:
                    worst_deg = max(worst_deg, enc.degree_used * enc.lam / (enc.K * math.log(1 / eps)))
    ok = worst_err_ratio <= 1 and worst_deg <= PROJECTOR_DEGREE_CONSTANT
    return ok, f"max error/eps {worst_err_ratio:.3f}, max degree*lambda/(K ln(1/eps)) {worst_deg:.2f} (C = {PROJECTOR_DEGREE_CONSTANT:.2f})"


def criterion_6():
    fx = named_complexes()
    C4, K3 = fx["C4"], fx["K3"]
    hits = sum(abs(estimate_normalized_betti(C4, 1, 0.1, seed=s, with_truth=False).value - 0.25) <= 0.1 for s in range(200))
    k3 = estimate_normalized_betti(K3, 1, 0.05, seed=1, with_truth=False).value
    # noisy sampler: deviation from the truth stays within delta + eps, also on a complex where simplices differ
    shift_ok = 0
    for s in range(200):
        shift_ok += abs(estimate_normalized_betti(C4, 1, 0.1, delta_sampler=0.1, seed=s, with_truth=False).value - 0.25) <= 0.2
    mixed = fx["C4+K3"]
    truth = 1 / 7
    mixed_ok = sum(
        abs(estimate_normalized_betti(mixed, 1, 0.1, delta_sampler=0.1, seed=s, with_truth=False).value - truth) <= 0.2
        for s in range(50)
    )
    ok = hits >= 190 and k3 <= 0.05 and shift_ok >= 190 and mixed_ok >= 48
    return ok, f"C4 coverage {hits}/200, K3 value {k3:.3f}, noisy coverage C4 {shift_ok}/200, C4+K3 {mixed_ok}/50"


def criterion_7():
    fx = named_complexes()
    pairs = [("C4", "K4"), ("C5", "C5+chord"), ("C4", "C4"), ("C5", "C5"), ("K4", "K4"), ("C4+K3", "C4+K3")]
    lines = []
    ok = True
    for a, b in pairs:
        rep = estimate_normalized_persistent_betti(fx[a], fx[b], 1, 0.05, seed=3)
        good = abs(rep.value - rep.truth) <= rep.budget
        ok &= good
        lines.append(f"({a},{b}) {rep.value:.3f} vs {rep.truth:.3f}")
    return ok, "; ".join(lines)


def criterion_8():
    yes = verify_promise_homology(cycle_graph(4), 1, 1.0, np.array([1, -1, 1, 1]) / 2, 1e-7)
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(100):
        w = rng.normal(size=3)
        tr = verify_promise_homology(complete_graph(3), 1, 3.0, w / np.linalg.norm(w), 1e-7, seed=i)
        worst = max(worst, tr.p1)
    ok = yes.p1 >= 1 - 1e-6 and yes.decision == "YES" and worst <= 1e-6
    return ok, f"completeness p1 {yes.p1:.8f}, worst soundness p1 {worst:.1e}"


def criterion_9():
    fx = named_complexes()
    worst = {}
    for name, X in (("K3", fx["K3"]), ("tetra", tetrahedron_boundary())):
        k = 1
        L = laplacians(X, k).up
        for p in (0.0, 0.25, 0.5):
            P = lazy_walk_matrix(X, k, "up_PS17", p)
            U = np.eye(X.count(k)) - (1 - p) / (p * k + 1) * L
            err = 0.0
            for start in X.basis(k):
                tr = expectation_process(P, start, 20, lazy_walk_scaling(P, p), p)
                for t in range(20):
                    err = max(err, float(np.max(np.abs(tr.normalized[t + 1] - U @ tr.normalized[t]))))
            worst[(name, p)] = err
    ok = all(v <= 1e-10 for v in worst.values())
    detail = ", ".join(f"{n} p={p}: {v:.1e}" for (n, p), v in worst.items())
    return ok, detail


CRITERIA = {
    1: ("Laplacian consistency", criterion_1),
    2: ("Encoding identities", criterion_2),
    3: ("Circuit-tier fidelity", criterion_3),
    4: ("Rectangle polynomial", criterion_4),
    5: ("Projector synthesis", criterion_5),
    6: ("Betti estimation", criterion_6),
    7: ("Persistent Betti", criterion_7),
    8: ("Verifier", criterion_8),
    9: ("Up-walk expectation update", criterion_9),
}


def evaluate(number: int) -> tuple[bool, str, float]:
    start = time.perf_counter()
    ok, detail = CRITERIA[number][1]()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed <= TIME_LIMIT
    RESULTS[number] = (ok, detail, elapsed)
    return ok, detail, elapsed


def summary_line(number: int) -> str:
    ok, detail, elapsed = RESULTS[number]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number} ({CRITERIA[number][0]}, {elapsed:.1f}s): {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail, elapsed = evaluate(number)
    print(summary_line(number))
    assert ok, f"criterion {number} failed after {elapsed:.1f}s: {detail}"


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        evaluate(n)
        print(summary_line(n), flush=True)
