"""Command-line front end: named-state inspection, constant verification,
paradox audits, unitary synthesis, and protocol simulation.

Exit codes: 0 success, 1 verification or statistical check failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import core, jsonio, protocol, synthesis
from .core import StateVector
from .montecarlo import (
    MistakePolicy,
    OutcomeDistribution,
    TrialConfig,
    analytic_mistake_table,
    compare_distributions,
    run_trials,
)

SEED_ENV_VAR = "WIGNER_LAB_SEED"
SYNTH_NORM_TOL = 1e-8
SIGMA_BOUND = 4.0


def _fmt(x: float) -> str:
    if abs(x) < 5e-5:
        x = 0.0
    return f"{x:.4f}"


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 5e-5:
        return _fmt(z.real)
    return f"{_fmt(z.real)}{z.imag:+.4f}j"


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _columns(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def _seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _policy_type(text: str) -> MistakePolicy:
    try:
        return MistakePolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        value = int(env)
        if not 0 <= value < 1 << 64:
            raise ValueError(f"{SEED_ENV_VAR} must fit in 64 unsigned bits, got {env!r}")
        return value
    return 0


def _resolve_state(name: str) -> StateVector:
    if Path(name).is_file():
        return jsonio.load_state(name)
    obj = protocol.lookup(name)
    if not isinstance(obj, StateVector):
        raise ValueError(f"{name!r} names a matrix, not a state")
    return obj


def _resolve_vector(name: str) -> np.ndarray:
    if Path(name).is_file():
        data = json.loads(Path(name).read_text(encoding="utf-8"))
        return jsonio.vector_from_dict(data)
    obj = protocol.lookup(name)
    if not isinstance(obj, StateVector):
        raise ValueError(f"{name!r} names a matrix, not a vector")
    return np.array(obj.amplitudes)


# ---------------------------------------------------------------------------
# states


def _cmd_states(args: argparse.Namespace) -> int:
    state = _resolve_state(args.name)
    if args.frame is not None:
        expansion = protocol.frame_view(state, args.frame)
        view = f"frame:{args.frame}"
        naive_norm: float | None = expansion.naive_norm
    else:
        if args.basis == "charlie":
            bases = [protocol.charlie_basis("A" if q == 0 else "B") for q in range(state.num_qubits)]
        else:
            bases = [core.computational_basis() for _ in range(state.num_qubits)]
        expansion = core.change_basis(state, bases)
        view = f"basis:{args.basis}"
        naive_norm = None

    physical_norm = state.norm()
    if args.format == "json":
        payload = {
            "name": args.name,
            "view": view,
            "labels": list(expansion.labels),
            "coefficients": [[z.real, z.imag] for z in expansion.coefficients],
            "physical_norm": physical_norm,
        }
        if naive_norm is not None:
            payload["naive_norm"] = naive_norm
        sys.stdout.write(jsonio.dumps(payload))
    elif args.format == "csv":
        rows = [["label", "re", "im"]]
        rows += [
            [label, repr(float(z.real)), repr(float(z.imag))]
            for label, z in zip(expansion.labels, expansion.coefficients)
        ]
        sys.stdout.write(_csv_text(rows))
    else:
        print(f"{args.name}  ({view})")
        print(_columns([[label, _fmt_complex(z)] for label, z in zip(expansion.labels, expansion.coefficients)]))
        print(f"physical_norm  {_fmt(physical_norm)}")
        if naive_norm is not None:
            print(f"naive_norm     {_fmt(naive_norm)}")
    return 0


# ---------------------------------------------------------------------------
# verify


def _verification_checks(tol: float) -> list[tuple[str, float]]:
    matrices = protocol.named_matrices()
    checks = [
        (f"unitary_{key}", core.is_unitary(mat, tol).max_deviation) for key, mat in matrices.items()
    ]
    target = protocol.target_state().amplitudes
    for key, outcome in (("heads", protocol.AliceOutcome.HEADS), ("tails", protocol.AliceOutcome.TAILS)):
        evolved = core.apply(
            protocol.entangle_matrix(), core.apply(protocol.reset_matrix(outcome), protocol.initial_register(outcome))
        )
        checks.append((f"evolution_{key}", float(np.linalg.norm(evolved.amplitudes - target))))
    expansion = core.change_basis(
        protocol.target_state(), [protocol.charlie_basis("A"), protocol.charlie_basis("B")]
    )
    expected = np.array([np.sqrt(1 / 12), -np.sqrt(1 / 12), np.sqrt(1 / 12), np.sqrt(9 / 12)])
    checks.append(("charlie_coefficients", float(np.abs(expansion.coefficients - expected).max())))
    return checks


def _cmd_verify(args: argparse.Namespace) -> int:
    tol = args.tol
    checks = _verification_checks(tol)
    passed = all(value <= tol for _, value in checks)
    if args.format == "json":
        payload = {
            "tol": tol,
            "checks": [{"name": n, "value": v, "passed": v <= tol} for n, v in checks],
            "passed": passed,
        }
        sys.stdout.write(jsonio.dumps(payload))
    elif args.format == "csv":
        rows = [["name", "value", "passed"]]
        rows += [[n, repr(v), str(v <= tol).lower()] for n, v in checks]
        sys.stdout.write(_csv_text(rows))
    else:
        print(_columns([[n, f"{v:.3e}", "pass" if v <= tol else "FAIL"] for n, v in checks]))
        print(f"{'all checks passed' if passed else 'CHECKS FAILED'} (tol {tol:g})")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# audit


def _cmd_audit(args: argparse.Namespace) -> int:
    state = _resolve_state(args.name)
    report = protocol.paradox_audit(state, args.tol)
    if args.format == "json":
        payload = {
            "name": args.name,
            "tol": args.tol,
            "amp_h1": [report.amp_h1.real, report.amp_h1.imag],
            "amp_0okA": [report.amp_0okA.real, report.amp_0okA.imag],
            "amp_tokB": [report.amp_tokB.real, report.amp_tokB.imag],
            "p_okok": report.p_okok,
            "contradiction": report.contradiction_flag,
        }
        sys.stdout.write(jsonio.dumps(payload))
    elif args.format == "csv":
        rows = [["quantity", "re", "im"]]
        for name, z in (("amp_h1", report.amp_h1), ("amp_0okA", report.amp_0okA), ("amp_tokB", report.amp_tokB)):
            rows.append([name, repr(z.real), repr(z.imag)])
        rows.append(["p_okok", repr(report.p_okok), ""])
        rows.append(["contradiction", str(report.contradiction_flag).lower(), ""])
        sys.stdout.write(_csv_text(rows))
    else:
        print(f"audit {args.name}  (tol {args.tol:g})")
        rows = [
            ["amp_h1", _fmt_complex(report.amp_h1)],
            ["amp_0okA", _fmt_complex(report.amp_0okA)],
            ["amp_tokB", _fmt_complex(report.amp_tokB)],
            ["p_okok", f"{report.p_okok:.5f}"],
            ["contradiction", "yes" if report.contradiction_flag else "no"],
        ]
        print(_columns(rows))
    return 0


# ---------------------------------------------------------------------------
# synth


def _cmd_synth(args: argparse.Namespace) -> int:
    vec = _resolve_vector(args.input)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > SYNTH_NORM_TOL:
        print(f"error: input is not a unit vector: norm = {norm!r}", file=sys.stderr)
        return 2
    vec = vec / norm
    result = synthesis.synthesize_from_e0(vec) if args.from_e0 else synthesis.synthesize_to_e0(vec)
    text = jsonio.dumps(jsonio.matrix_to_dict(result.matrix))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"residual: {result.residual:.3e}")
    else:
        sys.stdout.write(text)
        print(f"residual: {result.residual:.3e}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# simulate


def _dist_json(dist: OutcomeDistribution) -> dict:
    return {label: {"count": dist.counts[label], "freq": dist.frequencies[label]} for label in dist.labels}


def _expected_resultants(config: TrialConfig) -> OutcomeDistribution:
    if config.mode == "analytic":
        return OutcomeDistribution.from_probabilities({"AB": 1.0, "ABht": 0.0, "ABth": 0.0})
    return analytic_mistake_table(config.policy)


def _cmd_simulate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    config = TrialConfig(n_trials=args.trials, seed=seed, policy=args.policy, mode=args.mode)
    if args.check:
        expected = _expected_resultants(config)  # rejects policies without a closed form
    result = run_trials(config, collect_traces=args.trace is not None)

    if args.trace is not None:
        rows = [["trial", "alice_outcome", "transform", "state", "charlie_a", "charlie_b"]]
        for t in result.traces:
            rows.append(
                [
                    str(t.trial_index),
                    t.alice_outcome.value if t.alice_outcome is not None else "-",
                    t.applied_transform if t.applied_transform is not None else "-",
                    t.resultant_state,
                    t.charlie_outcome[0],
                    t.charlie_outcome[1],
                ]
            )
        Path(args.trace).write_text(_csv_text(rows), encoding="utf-8")

    report = None
    if args.check and config.n_trials > 0:
        report = compare_distributions(result.resultant_states, expected, SIGMA_BOUND)

    if args.format == "json":
        payload = {
            "config": {
                "n_trials": config.n_trials,
                "seed": config.seed,
                "policy": config.policy.spec(),
                "mode": config.mode,
            },
            "resultant_states": _dist_json(result.resultant_states),
            "charlie": _dist_json(result.charlie),
            "seed": config.seed,
        }
        if report is not None:
            payload["check"] = {
                "sigma_bound": SIGMA_BOUND,
                "passed": report.passed,
                "labels": [
                    {
                        "label": c.label,
                        "frequency": c.frequency,
                        "expected": c.expected,
                        "margin": c.margin,
                        "limit": c.limit,
                        "passed": c.passed,
                    }
                    for c in report.checks
                ],
            }
        text = jsonio.dumps(payload)
    elif args.format == "csv":
        rows = [["section", "label", "count", "freq"]]
        for section, dist in (("resultant_states", result.resultant_states), ("charlie", result.charlie)):
            rows += [[section, label, str(dist.counts[label]), repr(dist.frequencies[label])] for label in dist.labels]
        text = _csv_text(rows)
    else:
        lines = [f"simulate  n={config.n_trials}  seed={config.seed}  policy={config.policy.spec()}  mode={config.mode}"]
        for section, dist in (("resultant states", result.resultant_states), ("charlie outcomes", result.charlie)):
            lines.append(section)
            lines.append(
                _columns([[label, str(dist.counts[label]), f"{dist.frequencies[label]:.5f}"] for label in dist.labels])
            )
        if report is not None:
            lines.append("check vs closed form (4 sigma): " + ("pass" if report.passed else "FAIL"))
        text = "\n".join(lines) + "\n"

    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if report is None or report.passed else 1


# ---------------------------------------------------------------------------
# table


def _cmd_table(args: argparse.Namespace) -> int:
    aggregate = analytic_mistake_table(args.policy)  # rejects alternating
    eps = args.policy.mistake_probability
    p_h, p_t = 1 / 3, 2 / 3
    rows = [
        ("psi_h0", p_h, "A_h0", 1.0 - eps, "AB", p_h * (1.0 - eps)),
        ("psi_h0", p_h, "A_t01", eps, "ABht", p_h * eps),
        ("psi_t01", p_t, "A_h0", eps, "ABth", p_t * eps),
        ("psi_t01", p_t, "A_t01", 1.0 - eps, "AB", p_t * (1.0 - eps)),
    ]
    if args.format == "json":
        payload = {
            "policy": args.policy.spec(),
            "rows": [
                {
                    "initial_state": r[0],
                    "p_initial": r[1],
                    "transform": r[2],
                    "p_transform": r[3],
                    "resultant_state": r[4],
                    "p_joint": r[5],
                }
                for r in rows
            ],
            "resultant_states": dict(aggregate.frequencies),
        }
        sys.stdout.write(jsonio.dumps(payload))
    elif args.format == "csv":
        out = [["initial_state", "p_initial", "transform", "p_transform", "resultant_state", "p_joint"]]
        out += [[r[0], repr(r[1]), r[2], repr(r[3]), r[4], repr(r[5])] for r in rows]
        sys.stdout.write(_csv_text(out))
    else:
        header = ["initial_state", "p_initial", "transform", "p_transform", "resultant_state", "p_joint"]
        body = [[r[0], _fmt(r[1]), r[2], _fmt(r[3]), r[4], _fmt(r[5])] for r in rows]
        print(_columns([header] + body))
        print("aggregate  " + "  ".join(f"{label}={_fmt(p)}" for label, p in aggregate.frequencies.items()))
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    fmt_parent = argparse.ArgumentParser(add_help=False)
    fmt_parent.add_argument("--format", choices=("pretty", "json", "csv"), default="pretty")

    parser = argparse.ArgumentParser(
        prog="wigner-lab",
        description="Statevector simulation and numerical audit of the extended Wigner's friend protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_states = sub.add_parser("states", parents=[fmt_parent], help="print a named state in a basis or frame view")
    p_states.add_argument("name", help="registry key or state JSON path")
    group = p_states.add_mutually_exclusive_group()
    group.add_argument("--basis", choices=("computational", "charlie"), default="computational")
    group.add_argument("--frame", choices=("bs", "as"))
    p_states.set_defaults(func=_cmd_states)

    p_verify = sub.add_parser("verify", parents=[fmt_parent], help="verify protocol constants and evolution")
    p_verify.add_argument("--tol", type=float, default=1e-12)
    p_verify.set_defaults(func=_cmd_verify)

    p_audit = sub.add_parser("audit", parents=[fmt_parent], help="four-condition paradox audit of a 2-qubit state")
    p_audit.add_argument("name", help="registry key or state JSON path")
    p_audit.add_argument("--tol", type=float, default=protocol.AUDIT_TOL)
    p_audit.set_defaults(func=_cmd_audit)

    p_synth = sub.add_parser("synth", parents=[fmt_parent], help="synthesize a unitary moving a unit vector to/from e0")
    p_synth.add_argument("input", help="registry key or vector JSON path")
    direction = p_synth.add_mutually_exclusive_group(required=True)
    direction.add_argument("--to-e0", dest="from_e0", action="store_false")
    direction.add_argument("--from-e0", dest="from_e0", action="store_true")
    p_synth.add_argument("--out", help="write the matrix JSON here instead of stdout")
    p_synth.set_defaults(func=_cmd_synth)

    p_sim = sub.add_parser("simulate", parents=[fmt_parent], help="sample the protocol under a mistake policy")
    p_sim.add_argument("-n", "--trials", type=int, default=10000)
    p_sim.add_argument("--seed", type=_seed_type, default=None, help=f"defaults to ${SEED_ENV_VAR} or 0")
    p_sim.add_argument("--policy", type=_policy_type, default=MistakePolicy.uniform_random())
    p_sim.add_argument("--mode", choices=("collapse", "analytic"), default="collapse")
    p_sim.add_argument("--check", action="store_true", help="compare against the closed form at 4 sigma")
    p_sim.add_argument("--trace", help="write a per-trial CSV trace to this path")
    p_sim.add_argument("--out", help="write results here instead of stdout")
    p_sim.set_defaults(func=_cmd_simulate)

    p_table = sub.add_parser("table", parents=[fmt_parent], help="closed-form mistake table for a policy")
    p_table.add_argument("--policy", type=_policy_type, default=MistakePolicy.uniform_random())
    p_table.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main(sys.argv[1:]))
