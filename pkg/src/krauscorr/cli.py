"""Command-line front end.

    krauscorr basis N [--out FILE]
    krauscorr evolve MODEL --t-max X --steps K --out DIR
    krauscorr analyze MODEL [--out FILE]
    krauscorr cnot-demo --out DIR

``analyze`` exits 0 for a local-unitary dynamics and 1 otherwise; malformed
input exits 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .compat import (
    CnotCorrelation,
    Conclusion,
    build_cnot_model,
    cnot_inhomogeneity_closed_form,
    verify_theorem,
)
from .composite import is_factorable
from .dynamics import inhomogeneous_part, is_local_unitary, split_reduced_map
from .linalg import frobenius, trace_norm
from .model_io import ModelError, encode_matrix, load_model
from .su_basis import generators, structure_constants

log = logging.getLogger("krauscorr")

EXIT_LOCAL, EXIT_INCOMPATIBLE, EXIT_ERROR = 0, 1, 2


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_json(obj, path: str | Path | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_csv(path: Path, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def basis_payload(n: int) -> dict:
    b = generators(n)
    g = structure_constants(b)
    return {
        "n": n,
        "generators": [encode_matrix(s) for s in b],
        "structure_constants": g.g.tolist(),
    }


def cmd_basis(args) -> int:
    if args.n < 2:
        raise ModelError(f"basis: N must be >= 2, got {args.n}")
    _write_json(basis_payload(args.n), args.out)
    return 0


def evolve_records(model, times) -> list[dict]:
    s0 = model.initial()
    records = []
    for t in times:
        split = split_reduced_map(model.hamiltonian, s0, float(t), tol=1e-9)
        records.append(
            {
                "t": float(t),
                "delta_rho_norm": frobenius(split.inhomogeneous),
                "trace_distance": 0.5 * trace_norm(split.reduced - split.homogeneous),
                "kraus_completeness_residual": split.kraus.completeness_residual(),
                "split_residual": split.residual,
            }
        )
    return records


def cmd_evolve(args) -> int:
    model = load_model(args.model)
    if args.steps < 1:
        raise ModelError("evolve: --steps must be >= 1")
    times = np.linspace(0.0, args.t_max, args.steps + 1)
    records = evolve_records(model, times)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = list(records[0])
    _write_csv(out / "timeseries.csv", header, [[r[k] for k in header] for r in records])
    report = verify_theorem(model.hamiltonian, model.dim_a, model.dim_b, args.tol)
    _write_json(
        {
            "model": str(args.model),
            "records": records,
            "verdicts": {
                "localUnitary": is_local_unitary(model.hamiltonian, model.dim_a, model.dim_b, args.tol),
                "initialFactorable": is_factorable(model.initial(), args.tol),
                "maxDeltaRhoNorm": max(r["delta_rho_norm"] for r in records),
                "conclusion": report.conclusion.value,
            },
        },
        out / "report.json",
    )
    log.info("wrote %d records to %s", len(records), out)
    return 0


def cmd_analyze(args) -> int:
    model = load_model(args.model)
    report = verify_theorem(model.hamiltonian, model.dim_a, model.dim_b, args.tol)
    _write_json(report.to_dict(), args.out)
    return EXIT_LOCAL if report.conclusion is Conclusion.LOCAL_UNITARY else EXIT_INCOMPATIBLE


def cnot_demo(out: Path, seed: int, samples: int = 50) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    h, dec = build_cnot_model()
    pauli = generators(2)
    rng = np.random.default_rng(seed)

    decomposition = {
        "scalar": dec.scalar,
        "hA_coeffs": [float(np.trace(dec.h_a @ s).real / 2) for s in pauli],
        "hB_coeffs": [float(np.trace(dec.h_b @ s).real / 2) for s in pauli],
        "v_coeffs": dec.v_coeffs.tolist(),
    }
    _write_json(decomposition, out / "decomposition.json")

    rows = []
    for _ in range(samples):
        gamma = np.zeros((3, 3))
        gamma[1, 2], gamma[2, 2] = rng.uniform(-0.2, 0.2, size=2)
        t = rng.uniform(0.0, 2 * np.pi)
        cor = CnotCorrelation(gamma)
        d = inhomogeneous_part(h, cor.operator(), t)
        n2, n3 = (float(np.trace(d @ pauli[k]).real / 2) for k in (1, 2))
        c2, c3 = cnot_inhomogeneity_closed_form(cor, t)
        resid = frobenius(d - (c2 * pauli[1] + c3 * pauli[2]))
        rows.append([t, gamma[1, 2], gamma[2, 2], n2, n3, c2, c3, resid])
    _write_csv(
        out / "comparison.csv",
        ["t", "gamma23", "gamma33", "numeric_c2", "numeric_c3", "closed_c2", "closed_c3", "residual"],
        rows,
    )

    # every coefficient except gamma_23 and gamma_33; |sum gamma sigma (x) sigma|_2 <= sum |gamma|
    gamma = rng.uniform(-1, 1, size=(3, 3))
    gamma[1, 2] = gamma[2, 2] = 0.0
    gamma *= 0.2 / np.abs(gamma).sum()
    cor = CnotCorrelation(gamma)
    sub_rows = [[t, frobenius(inhomogeneous_part(h, cor.operator(), t))] for t in np.linspace(0, 2 * np.pi, 20)]
    _write_csv(out / "compatible_subclass.csv", ["t", "delta_rho_norm"], sub_rows)

    summary = {
        "seed": seed,
        "v13": dec.v_coeffs[0, 2],
        "comparisonMaxResidual": max(r[-1] for r in rows),
        "compatibleSubclassGamma": gamma.tolist(),
        "compatibleSubclassMaxDeltaRho": max(r[1] for r in sub_rows),
    }
    _write_json(summary, out / "summary.json")
    return summary


def cmd_cnot_demo(args) -> int:
    summary = cnot_demo(Path(args.out), args.seed)
    log.info(
        "v13 = %g, max closed-form residual %.3e, compatible subclass max |delta rho| %.3e",
        summary["v13"],
        summary["comparisonMaxResidual"],
        summary["compatibleSubclassMaxDeltaRho"],
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="zero tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized checks")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="krauscorr", description="Kraus compatibility of bipartite dynamics.", parents=[common])
    p.set_defaults(tol=1e-10, seed=20240613, verbose=False)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", parents=[common], help="dump SU(N) generators and structure constants as JSON")
    b.add_argument("n", type=int)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_basis)

    e = sub.add_parser("evolve", parents=[common], help="reduced dynamics time series for a model")
    e.add_argument("model")
    e.add_argument("--t-max", type=float, required=True)
    e.add_argument("--steps", type=int, required=True, help="grid intervals; K+1 points including both ends")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_evolve)

    a = sub.add_parser("analyze", parents=[common], help="Kraus compatibility report for a model")
    a.add_argument("model")
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cnot-demo", parents=[common], help="controlled-NOT worked example")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_cnot_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
