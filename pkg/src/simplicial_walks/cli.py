"""Command-line interface.

Exit codes: 0 on success, 2 when an input violates a precondition, 3 when
a spectral gap or promise fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import apps
from .complex_core import build_clique_complex, load_graph
from .errors import PreconditionError, PromiseViolationError
from .hodge import betti_exact, laplacians, spectral_summary, ZERO_TOL
from .qsvt import CLI_TARGETS, projector_encoding, projector_error
from .walk_markov import (
    lazy_walk_matrix,
    evolve_distribution,
    evolve_monte_carlo,
    expectation_process,
    state_index,
    state_labels,
    lazy_walk_scaling,
    transition_matrix,
)
from .walk_quantum import laplacian_block, operation_count

EXIT_OK, EXIT_PRECONDITION, EXIT_PROMISE = 0, 2, 3

WALK_KINDS = {"up": "up", "down": "down", "harmonic": "harmonic", "up-ps17": "up_PS17", "down-m16": "down_M16"}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--input", default=d(None), help="JSON graph file")
    parser.add_argument("--k", type=int, default=d(1), help="simplex dimension")
    parser.add_argument("--epsilon", type=float, default=d(1e-3), help="target accuracy")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--tier", choices=("oracle", "circuit"), default=d("oracle"))
    parser.add_argument("--output", choices=("csv", "json"), default=d(None), help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplicial-walks", description="Walks, Laplacian encodings and Betti estimators on clique complexes.")
    _global_flags(parser, suppress=False)
    verbs = parser.add_subparsers(dest="verb", required=True)

    def leaf(sub, name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        return p

    complex_ = verbs.add_parser("complex", help="complex inspection").add_subparsers(dest="action", required=True)
    leaf(complex_, "info", "simplex counts and edges")

    p = leaf(verbs, "spectrum", "Laplacian spectrum and Betti number")
    p.add_argument("--laplacian", choices=("full", "up", "down"), default="full")

    walk = verbs.add_parser("walk", help="classical walks").add_subparsers(dest="action", required=True)
    p = leaf(walk, "simulate", "evolve a walk distribution")
    p.add_argument("--kind", choices=tuple(WALK_KINDS), required=True)
    p.add_argument("--t", type=int, default=10, help="number of steps")
    p.add_argument("--start", required=True, help="oriented start simplex, e.g. 1,0")
    p.add_argument("--p", type=float, default=0.0, help="laziness of the tabulated walks")
    p.add_argument("--trajectories", type=int, default=0, help="Monte Carlo walkers; 0 evolves exactly")

    p = leaf(verbs, "encode", "Laplacian block of a walk unitary")
    p.add_argument("--kind", choices=("up", "down", "harmonic"), required=True)
    p.add_argument("--delta", type=float, default=0.0, help="amplitude preparation error (circuit tier)")
    p.add_argument("--report", default=None, help="file for the operation-count JSON (default stderr)")

    p = leaf(verbs, "project", "approximate Hodge projector")
    p.add_argument("--target", choices=tuple(CLI_TARGETS), required=True)

    betti = verbs.add_parser("betti", help="normalized Betti estimation").add_subparsers(dest="action", required=True)
    p = leaf(betti, "estimate", "sample-and-measure estimate of beta_k / n_k")
    p.add_argument("--delta-sampler", type=float, default=0.0)
    p.add_argument("--eps-proj", type=float, default=1e-6)

    pers = verbs.add_parser("persistent", help="normalized persistent Betti estimation").add_subparsers(dest="action", required=True)
    p = leaf(pers, "estimate", "estimate beta_k^{i,j} / n_k for nested graphs")
    p.add_argument("--input-j", required=True, help="JSON graph file of the larger complex")
    p.add_argument("--delta-sampler", type=float, default=0.0)
    p.add_argument("--eps-proj", type=float, default=1e-6)
    p.add_argument("--gap", type=float, default=0.1)

    p = leaf(verbs, "verify", "single-message homology verifier")
    p.add_argument("--g", type=float, required=True, help="promised spectral gap")
    p.add_argument("--witness", required=True, help="JSON list, comma-separated values, or a file holding either")
    p.add_argument("--weight-exponent", type=float, default=3.0)
    return parser


def _complex(args):
    if args.input is None:
        raise PreconditionError("--input is required")
    return build_clique_complex(load_graph(args.input))


def _fmt(args, default: str) -> str:
    return args.output or default


def _emit_json(doc) -> str:
    return json.dumps(doc, indent=2)


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _matrix_csv(M) -> str:
    return _emit_csv(None, [[repr(float(v)) for v in row] for row in np.asarray(M)])


def _parse_simplex(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip())
    except ValueError as exc:
        raise PreconditionError(f"cannot parse simplex {text!r}") from exc


def _parse_witness(text: str) -> np.ndarray:
    path = Path(text)
    if path.is_file():
        text = path.read_text()
    text = text.strip()
    try:
        values = json.loads(text) if text.startswith("[") else [float(v) for v in text.split(",")]
        return np.asarray(values, dtype=float)
    except ValueError as exc:
        raise PreconditionError(f"cannot parse witness {text[:40]!r}") from exc


def cmd_complex_info(args) -> str:
    X = _complex(args)
    doc = {
        "n": X.n,
        "k_max": X.k_max,
        "counts": list(X.counts),
        "edges": [list(e) for e in X.graph.edges],
        "weights": X.weights.tolist(),
    }
    if _fmt(args, "json") == "json":
        return _emit_json(doc)
    return _emit_csv(["k", "count"], list(enumerate(X.counts)))


def cmd_spectrum(args) -> str:
    X = _complex(args)
    L = laplacians(X, args.k)
    M = getattr(L, args.laplacian)
    evals = np.linalg.eigvalsh(M) if M.size else np.zeros(0)
    try:
        lam = spectral_summary(M).lambda_min_nonzero
    except PreconditionError:
        lam = None
    doc = {
        "k": args.k,
        "laplacian": args.laplacian,
        "eigenvalues": [float(v) for v in evals],
        "lambda_min_nonzero": lam,
        "betti": betti_exact(X, args.k),
        "zero_tol": ZERO_TOL,
    }
    if _fmt(args, "json") == "json":
        return _emit_json(doc)
    return _emit_csv(["index", "eigenvalue"], [(i, repr(float(v))) for i, v in enumerate(evals)])


def cmd_walk_simulate(args) -> str:
    X = _complex(args)
    kind = WALK_KINDS[args.kind]
    start = _parse_simplex(args.start)
    if kind in ("up_PS17", "down_M16"):
        P = lazy_walk_matrix(X, args.k, kind, args.p)
        scaling = lazy_walk_scaling(P, args.p)
    else:
        P = transition_matrix(X, args.k, kind)
        scaling = 1.0
    v0 = np.zeros(P.entries.shape[0])
    v0[state_index(X, args.k, start)] = 1.0
    trace = expectation_process(P, start, args.t, scaling, args.p)
    dists = []
    for step in range(args.t + 1):
        if args.trajectories > 0:
            dists.append(evolve_monte_carlo(P, v0, step, args.trajectories, args.seed + step))
        else:
            dists.append(evolve_distribution(P, v0, step))
    labels = [str(lab) for lab in state_labels(X, args.k)]
    basis_names = ["[" + ",".join(map(str, s)) + "]" for s in X.basis(args.k)]
    if _fmt(args, "csv") == "json":
        return _emit_json({
            "kind": kind,
            "k": args.k,
            "states": labels,
            "distributions": [d.tolist() for d in dists],
            "expectation": trace.normalized.tolist(),
            "scaling": scaling,
        })
    header = ["step"] + [f"p{lab}" for lab in labels] + [f"E{name}" for name in basis_names]
    rows = [[step] + [repr(float(x)) for x in dists[step]] + [repr(float(x)) for x in trace.normalized[step]] for step in range(args.t + 1)]
    return _emit_csv(header, rows)


def cmd_encode(args) -> str:
    X = _complex(args)
    enc = laplacian_block(X, args.k, args.kind, args.tier, prep_err=args.delta, seed=args.seed)
    if args.tier == "circuit":
        report = {"kind": args.kind, "n": X.n, "k": args.k, "scale": enc.scale, "block_error": enc.err}
        report.update(operation_count(X.n, args.k, args.kind, args.delta or 1e-10))
        text = _emit_json(report)
        if args.report:
            Path(args.report).write_text(text + "\n")
        else:
            print(text, file=sys.stderr)
    if _fmt(args, "csv") == "json":
        return _emit_json({"kind": args.kind, "tier": args.tier, "scale": enc.scale, "err": enc.err, "block": enc.block.tolist()})
    return _matrix_csv(enc.block)


def cmd_project(args) -> str:
    X = _complex(args)
    target = CLI_TARGETS[args.target]
    proj = projector_encoding(X, args.k, target, args.epsilon, args.tier, seed=args.seed)
    err = projector_error(X, args.k, proj)
    if _fmt(args, "json") == "json":
        return _emit_json({
            "target": target,
            "epsilon": args.epsilon,
            "degree_used": proj.degree_used,
            "error": err,
            "block": proj.block.tolist(),
        })
    print(json.dumps({"target": target, "degree_used": proj.degree_used, "error": err}), file=sys.stderr)
    return _matrix_csv(proj.block)


def _report_doc(rep: apps.EstimateReport) -> dict:
    return {
        "value": rep.value,
        "epsilon": rep.epsilon,
        "samples_used": rep.samples_used,
        "confidence": rep.confidence,
        "budget": rep.budget,
        "truth": rep.truth,
        **rep.details,
    }


def _report_out(args, doc: dict) -> str:
    if _fmt(args, "json") == "json":
        return _emit_json(doc)
    return _emit_csv(list(doc), [list(doc.values())])


def cmd_betti_estimate(args) -> str:
    X = _complex(args)
    rep = apps.estimate_normalized_betti(X, args.k, args.epsilon, args.delta_sampler, args.eps_proj, args.seed, args.tier)
    return _report_out(args, _report_doc(rep))


def cmd_persistent_estimate(args) -> str:
    Xi = _complex(args)
    Xj = build_clique_complex(load_graph(args.input_j))
    rep = apps.estimate_normalized_persistent_betti(
        Xi, Xj, args.k, args.epsilon, args.delta_sampler, args.eps_proj, args.gap, args.seed, args.tier
    )
    return _report_out(args, _report_doc(rep))


def cmd_verify(args) -> str:
    if args.input is None:
        raise PreconditionError("--input is required")
    graph = load_graph(args.input)
    tr = apps.verify_promise_homology(
        graph, args.k, args.g, _parse_witness(args.witness), args.epsilon, args.seed, args.weight_exponent, args.tier
    )
    return _report_out(args, {"k": tr.k, "g": tr.g, "decision": tr.decision, "p1": tr.p1, "outcome": tr.outcome})


COMMANDS = {
    ("complex", "info"): cmd_complex_info,
    ("spectrum", None): cmd_spectrum,
    ("walk", "simulate"): cmd_walk_simulate,
    ("encode", None): cmd_encode,
    ("project", None): cmd_project,
    ("betti", "estimate"): cmd_betti_estimate,
    ("persistent", "estimate"): cmd_persistent_estimate,
    ("verify", None): cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[(args.verb, getattr(args, "action", None))]
    try:
        out = handler(args)
    except PromiseViolationError as exc:
        print(f"promise violation: {exc}", file=sys.stderr)
        return EXIT_PROMISE
    except (PreconditionError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
