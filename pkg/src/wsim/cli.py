"""``wsim`` command line front end.

Every subcommand prints one JSON document on stdout (``--pretty`` renders a
plain-text view instead). Exit codes: 0 success, 1 internal numeric failure,
2 usage or parse error, 3 infeasible optical model.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional

import numpy as np

from . import entanglement as ent
from . import optics, protocols
from .errors import InfeasibleTargetError, InvalidRegisterError, WSimError
from .qstate import NORM_TOL, StateVector

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
FILE_NORM_TOL = 1e-9
CANCEL_TOL = NORM_TOL  # same threshold the preparation warnings use


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- input


def _load_json(path: str) -> tuple[dict, str]:
    name = "<stdin>" if path == "-" else path
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"{name}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{name}: top level must be an object")
    return doc, name


def _parse_number(value, where: str) -> complex:
    if isinstance(value, bool):
        raise UsageError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise UsageError(f"{where}: expected a number or [re, im], got {value!r}")


def read_coefficient_file(path: str) -> tuple[ent.WSpec, dict]:
    """Parse and validate a coefficient file; returns the WSpec and the input echo."""
    doc, name = _load_json(path)
    for key in ("n", "coeffs"):
        if key not in doc:
            raise UsageError(f"{name}: missing key {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise UsageError(f"{name}: 'n' must be an integer >= 2, got {n!r}")
    raw = doc["coeffs"]
    if not isinstance(raw, list) or len(raw) != n:
        got = len(raw) if isinstance(raw, list) else type(raw).__name__
        raise UsageError(f"{name}: 'coeffs' must list {n} entries, got {got}")
    c = np.array([_parse_number(v, f"{name}: coeffs[{i}]") for i, v in enumerate(raw)])
    norm_sq = float(np.sum(np.abs(c) ** 2))
    if abs(norm_sq - 1) > FILE_NORM_TOL:
        raise UsageError(f"{name}: sum of |c_i|^2 is {norm_sq!r}, not 1 within {FILE_NORM_TOL:g}")
    w = ent.WSpec(c / np.sqrt(norm_sq))
    echo = {"source": name, "n": n, "coeffs": _coeff_list(w.coeffs), "raw_norm_sq": norm_sq}
    return w, echo


def read_chain_file(path: str) -> tuple[optics.BeamSplitterChain, dict]:
    doc, name = _load_json(path)
    if "reflectivities" not in doc:
        raise UsageError(f"{name}: missing key 'reflectivities'")
    refl = doc["reflectivities"]
    if not isinstance(refl, list) or not refl:
        raise UsageError(f"{name}: 'reflectivities' must be a nonempty list")
    r = [_parse_number(v, f"{name}: reflectivities[{i}]").real for i, v in enumerate(refl)]
    if "n" in doc and doc["n"] != len(r) + 1:
        raise UsageError(f"{name}: n = {doc['n']!r} but {len(r)} splitters give {len(r) + 1} modes")
    phases = doc.get("phases", [])
    phases = [_parse_number(v, f"{name}: phases[{i}]").real for i, v in enumerate(phases)]
    trans = doc.get("transmissivities", [])
    trans = [_parse_number(v, f"{name}: transmissivities[{i}]").real for i, v in enumerate(trans)]
    try:
        chain = optics.BeamSplitterChain(tuple(r), tuple(phases), tuple(trans))
    except InvalidRegisterError as exc:
        raise UsageError(f"{name}: {exc}") from None
    echo = {"source": name, "n": chain.n_modes, "reflectivities": list(r), "phases": list(chain.phases)}
    if trans:
        echo["transmissivities"] = list(trans)
    return chain, echo


def _input_qubit(alpha: float, beta: float) -> StateVector:
    norm_sq = alpha ** 2 + beta ** 2
    if abs(norm_sq - 1) > FILE_NORM_TOL:
        raise UsageError(f"alpha^2 + beta^2 = {norm_sq!r}, not 1 within {FILE_NORM_TOL:g}")
    s = np.sqrt(norm_sq)
    return StateVector(1, [alpha / s, beta / s])


# ---------------------------------------------------------------- output


def _coeff_list(c) -> list:
    """Coefficient-file encoding: real literal when the imaginary part is 0, else [re, im]."""
    return [float(z.real) if z.imag == 0 else complex(z) for z in np.asarray(c, dtype=complex)]


def _clean(x: Any) -> Any:
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.15g}")
        return 0.0 if v == 0 else v
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(x.real), _clean(x.imag)]
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _document(command: str, inputs: dict, results: dict, warnings: list[str], tolerances: dict) -> dict:
    return _clean({
        "command": command,
        "inputs": inputs,
        "results": results,
        "tolerances": tolerances,
        "warnings": warnings,
    })


def _render_pretty(doc: dict) -> str:
    lines = [f"wsim {doc['command']}"]

    def walk(obj, indent):
        pad = "  " * indent
        for key, value in obj.items():
            if isinstance(value, dict):
                lines.append(f"{pad}{key}:")
                walk(value, indent + 1)
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{pad}{key}:")
                cols = list(value[0])
                lines.append(pad + "  " + "  ".join(f"{c:>18}" for c in cols))
                for row in value:
                    lines.append(pad + "  " + "  ".join(f"{str(row[c]):>18}" for c in cols))
            else:
                lines.append(f"{pad}{key}: {value}")

    for section in ("inputs", "results", "tolerances"):
        lines.append(f"{section}:")
        walk(doc[section], 1)
    for w in doc["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def _branch_rows(report: protocols.ProtocolReport) -> list[dict]:
    return [
        {"outcome": b.outcome, "probability": b.probability, "fidelity": b.bob_fidelity, "heralded": b.heralded}
        for b in report.branches
    ]


# ---------------------------------------------------------------- commands


def cmd_concurrence(args) -> dict:
    w, echo = read_coefficient_file(args.file)
    warnings = []
    if args.pair:
        m, n = args.pair
        if m == n or not (1 <= m <= w.n and 1 <= n <= w.n):
            raise UsageError(f"--pair {m} {n} is not a pair of distinct qubits in 1..{w.n}")
        echo["pair"] = [m, n]
        rep = ent.concurrence_report(w, m, n)
        results = {
            "pair": list(rep.pair),
            "closed_form": rep.closed_form,
            "wootters": rep.wootters,
            "difference": abs(rep.closed_form - rep.wootters),
            "eigenvalues": list(rep.eigenvalues),
        }
    else:
        results = {
            "pairwise": ent.pairwise_matrix(w),
            "total": ent.total_concurrence(w),
            "mirror": ent.mirror_concurrence(w),
            "mirror_pairs": [list(p) for p in ent.mirror_pairs(w.n)],
        }
        if ent.has_mirror_self_pair(w.n):
            mid = (w.n + 1) // 2
            warnings.append(f"odd N: mirror sum includes self-pair ({mid}, {mid}) contributing 2|c_{mid}|^2")
    tol = {"closed_vs_wootters": 1e-9, "eigenvalue_noise_ulps": ent.EIG_NOISE_ULPS}
    return _document("concurrence", echo, results, warnings, tol)


def cmd_qst(args) -> dict:
    w, echo = read_coefficient_file(args.file)
    psi = _input_qubit(args.alpha, args.beta)
    echo.update(alpha=float(psi.amps[0].real), beta=float(psi.amps[1].real))
    report = protocols.run_qst(w, psi)
    results = {
        "branches": _branch_rows(report),
        "success_probability": report.success_probability,
        "claimed_probability": report.claimed_probability,
        "difference": abs(report.success_probability - report.claimed_probability),
        "t": report.details["t"],
        "pre_balancer_rates": report.details["pre_balancer_rates"],
    }
    if args.seed is not None:
        echo.update(seed=args.seed, trials=args.trials)
        results["sampled"] = protocols.sample_report(report, args.trials, args.seed)
    tol = {"success_fidelity": protocols.SUCCESS_FIDELITY, "probability_sum": 1e-10}
    return _document("qst", echo, results, report.warnings, tol)


def cmd_prepare(args) -> dict:
    w, echo = read_coefficient_file(args.file)
    if abs(args.alpha ** 2 + args.beta ** 2 - 1) > FILE_NORM_TOL:
        raise UsageError(f"alpha^2 + beta^2 = {args.alpha ** 2 + args.beta ** 2!r}, not 1 within {FILE_NORM_TOL:g}")
    s = np.hypot(args.alpha, args.beta)
    basis = protocols.rotated_basis(args.alpha / s, args.beta / s)
    echo.update(alpha=basis.alpha, beta=basis.beta)
    if w.n == 2:
        report = protocols.prepare_two_qubit(w.c(1), w.c(2), basis)
        target = {"state": "phi", "amps": basis.phi.amps}
    else:
        report = protocols.prepare_w(w, basis)
        target = {"state": "phi or psi (complement of qubit-1 outcome)", "phi": basis.phi.amps, "psi": basis.psi.amps}
    # sub-tolerance residue of an exact cancellation prints as 0
    coeffs = {k: (0j if abs(v) < CANCEL_TOL else v) for k, v in report.details["coefficients"].items()}
    results = {
        "coefficients": coeffs,
        "branches": _branch_rows(report),
        "success_probability": report.success_probability,
        "claimed_probability": report.claimed_probability,
        "target": target,
    }
    tol = {"success_fidelity": protocols.SUCCESS_FIDELITY, "cancellation": CANCEL_TOL}
    return _document("prepare", echo, results, report.warnings, tol)


def cmd_design_bs(args) -> dict:
    w, echo = read_coefficient_file(args.file)
    chain = optics.design_chain(w)
    sim = optics.simulate_chain(chain).amplitudes
    results = {
        "reflectivities": chain.reflectivities,
        "transmissivities": chain.transmissivities,
        "phases": chain.phases,
        "verification": {
            "simulated_magnitudes": np.abs(sim),
            "target_magnitudes": np.abs(w.coeffs),
            "max_deviation": float(np.abs(sim - w.coeffs).max()),
        },
        "chain": {
            "n": chain.n_modes,
            "reflectivities": chain.reflectivities,
            "transmissivities": chain.transmissivities,
            "phases": chain.phases,
        },
    }
    if args.run_qst:
        psi = _input_qubit(args.alpha, args.beta)
        echo.update(alpha=float(psi.amps[0].real), beta=float(psi.amps[1].real))
        composed = optics.transfer_through_cavities(chain, psi)
        direct = protocols.run_qst(w, psi)
        results["pipeline"] = {
            "success_probability": composed.success_probability,
            "direct_success_probability": direct.success_probability,
            "claimed_probability": composed.claimed_probability,
        }
    tol = {"round_trip": 1e-12, "pipeline": 1e-9}
    return _document("design-bs", echo, results, [], tol)


def cmd_simulate_bs(args) -> dict:
    chain, echo = read_chain_file(args.file)
    amps = optics.simulate_chain(chain).amplitudes
    w, index_map = optics.cavity_register(optics.ModeState(amps))
    results = {
        "amplitudes": amps,
        "norm": float(np.linalg.norm(amps)),
        "cavity_index_map": list(index_map),
        "coefficient_file": {"n": w.n, "coeffs": _coeff_list(w.coeffs)},
    }
    return _document("simulate-bs", echo, results, [], {"norm": 1e-12})


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsim", description="General W-state simulation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file_help="coefficient file (JSON) or - for stdin"):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help=file_help)
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.set_defaults(func=func)
        return p

    p = add("concurrence", cmd_concurrence, "pairwise, total and mirror concurrence")
    p.add_argument("--pair", type=int, nargs=2, metavar=("M", "N"), help="compare closed form and Wootters")
    for name, func, help_text in [
        ("qst", cmd_qst, "quantum state transfer from qubit 1 to qubit N"),
        ("prepare", cmd_prepare, "remote state preparation in the rotated basis"),
    ]:
        p = add(name, func, help_text)
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float, required=True)
        if name == "qst":
            p.add_argument("--seed", type=int, default=None, help="also sample trials with this seed")
            p.add_argument("--trials", type=int, default=10000)
    p = add("design-bs", cmd_design_bs, "reflectivities of the single-photon beam-splitter chain")
    p.add_argument("--run-qst", action="store_true", help="append the design->cavity->transfer pipeline")
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--beta", type=float, default=0.8)
    add("simulate-bs", cmd_simulate_bs, "output amplitudes of a beam-splitter chain",
        file_help="chain file (JSON with 'reflectivities', optional 'phases' and 'transmissivities') or -")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
    except UsageError as exc:
        print(f"wsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleTargetError as exc:
        print(f"wsim {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvalidRegisterError as exc:
        print(f"wsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WSimError, ArithmeticError) as exc:
        print(f"wsim {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.pretty:
        print(_render_pretty(doc))
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
