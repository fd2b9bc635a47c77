"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 mathematical precondition failure
(non-exact lumping, singular M, uncontrollable system, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .compartmental import ChainSpec, chain_to_network, gen_chain
from .errors import InvalidInputError, LumpingError
from .linalg import EPS
from .lti import LtiSystem, is_controllable, is_observable, pair_report
from .lumping import (
    DEFAULT_EXACT_TOL,
    build_m_from_eigenvectors,
    is_kinetic_lumping,
    lump_system,
    make_scheme,
    verify_preservation,
)
from .mmatrix import classify
from .simulation import ControlSignal, lumped_trajectory_check, simulate, steer

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 2, 3


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _tolerances(args) -> dict:
    return {"rank_rel_tol": args.tol, "rank_rel_tol_default": "max(rows, cols) * eps", "eps": EPS}


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _evidence_line(label: str, ev: dict) -> str:
    return (f"{label}: {_yes(ev['verdict'])} (rank {ev['rank']}/{ev['state_dim']}, "
            f"tol {ev['tolerance_used']:.3e})")


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))


def _observability(sf: io.SystemFile, tol):
    if sf.a_dual is not None:
        return pair_report(sf.a_dual, sf.system.c.T, "observability", tol)
    return is_observable(sf.system, tol)


def cmd_analyze(args) -> int:
    sf = io.load_system(args.system)
    ctrl = io.rank_evidence(is_controllable(sf.system, args.tol))
    obs = io.rank_evidence(_observability(sf, args.tol))
    report = io.make_report(
        "analyze", {"system": str(args.system), "k_comment": sf.k_comment},
        {"controllability": ctrl, "observability": obs}, _tolerances(args))
    _emit(args, report, [_evidence_line("controllable", ctrl), _evidence_line("observable", obs)])
    return EXIT_OK


def _resolve_m(args, sys_) -> np.ndarray:
    if args.m_file:
        return io.load_m(args.m_file)
    if args.eigvecs:
        sel = [i - 1 for i in args.eigvecs]
        l = len(sel)
        mix = None
        if args.mix is not None:
            if len(args.mix) != l * l:
                raise InvalidInputError(f"--mix needs {l * l} entries for {l} eigenvectors")
            mix = np.array(args.mix).reshape(l, l)
        return build_m_from_eigenvectors(sys_.a, sel, mix)
    raise InvalidInputError("one of --m-file or --eigvecs is required")


def cmd_lump(args) -> int:
    sf = io.load_system(args.system)
    m = _resolve_m(args, sf.system)
    scheme = make_scheme(sf.system.a, m, args.exact_tol)
    lumped = lump_system(sf.system, scheme)
    pres = verify_preservation(sf.system, scheme, args.tol)
    kin = is_kinetic_lumping(m)
    lumped_ctrl = io.rank_evidence(lumped.is_controllable(args.tol))
    dual_ok = lumped.dual_residual <= scheme.exact_tol
    lumped_obs = io.rank_evidence(lumped.is_observable(args.tol)) if dual_ok else None

    if args.out:
        out_sys = LtiSystem(lumped.a, lumped.b, lumped.c_dual.T)
        io.write_system(args.out, out_sys, a_dual=lumped.a_dual,
                        k_comment=f"lumped from {Path(args.system).name}")
    results = {
        "M": m.tolist(),
        "A_hat": lumped.a.tolist(),
        "MB": lumped.b.tolist(),
        "A_tilde": lumped.a_dual.tolist(),
        "MC_T": lumped.c_dual.tolist(),
        "residual": scheme.residual,
        "dual_residual": lumped.dual_residual,
        "is_kinetic": {"verdict": kin.ok, "pivots": kin.pivots, "reason": kin.reason},
        "lumped_controllability": lumped_ctrl,
        "lumped_observability": lumped_obs,
        "preservation": _preservation_dict(pres),
    }
    tols = dict(_tolerances(args), exact_tol=scheme.exact_tol)
    report = io.make_report("lump", {"system": str(args.system), "m_file": args.m_file,
                                     "eigvecs": args.eigvecs, "mix": args.mix, "out": args.out},
                            results, tols)
    lines = [
        "M = " + json.dumps(m.tolist()),
        "A_hat = " + json.dumps(lumped.a.tolist()),
        f"residual: {scheme.residual:.3e} (exact tol {scheme.exact_tol:.1e})",
        f"kinetic lumping: {_yes(kin.ok)}" + (f" (pivot columns {[p + 1 for p in kin.pivots]})" if kin.ok else f" ({kin.reason})"),
        _evidence_line("lumped controllable", lumped_ctrl),
    ]
    if lumped_obs is not None:
        lines.append(_evidence_line("lumped observable (dual)", lumped_obs))
    lines.append(_preservation_line(pres))
    _emit(args, report, lines)
    return EXIT_OK


def _preservation_dict(pres) -> dict:
    return {
        "original_controllable": pres.original_controllable,
        "lumped_controllable": pres.lumped_controllable,
        "original_rank": pres.original_rank,
        "lumped_rank": pres.lumped_rank,
        "state_dim": pres.state_dim,
        "lumped_dim": pres.lumped_dim,
        "theorem_consistent": pres.theorem_consistent,
    }


def _preservation_line(pres) -> str:
    def word(flag):
        return "controllable" if flag else "NOT controllable"
    tail = "consistent with theorem" if pres.theorem_consistent else "INCONSISTENT with theorem"
    return (f"original: {word(pres.original_controllable)} (rank {pres.original_rank}/{pres.state_dim}); "
            f"lumped: {word(pres.lumped_controllable)} (rank {pres.lumped_rank}/{pres.lumped_dim}); {tail}")


def cmd_mmatrix(args) -> int:
    sf = io.load_system(args.system)
    rep = classify(sf.system.a, args.s)
    results = {
        "classification": rep.classification.value,
        "s": rep.s,
        "T": None if rep.t is None else rep.t.tolist(),
        "t_nonnegative": rep.t_nonnegative,
        "t_symmetric": rep.t_symmetric,
        "t_irreducible": rep.t_irreducible,
        "rho": None if np.isnan(rep.rho) else rep.rho,
        "reason": rep.reason,
    }
    report = io.make_report("mmatrix", {"system": str(args.system), "s": args.s}, results,
                            {"rho_tol": 1e-9, "pattern_rtol": 1e-12})
    lines = [f"classification: {rep.classification.value}"]
    if rep.s is not None:
        lines.append(f"s = {rep.s!r}, rho(T) = {rep.rho:.12g}")
    if rep.reason:
        lines.append(f"reason: {rep.reason}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_gen_chain(args) -> int:
    spec = ChainSpec(args.n, args.k)
    text = io.dumps_system(gen_chain(spec), k_comment=f"k = {spec.k!r}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.network_out:
        Path(args.network_out).write_text(json.dumps(io.network_to_dict(chain_to_network(spec)), indent=2) + "\n")
    return EXIT_OK


def _write_csv(path, writer) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            writer(fh)
    else:
        writer(sys.stdout)


def cmd_simulate(args) -> int:
    sf = io.load_system(args.system)
    u = io.load_control_csv(args.u_file) if args.u_file else None
    traj = simulate(sf.system, args.x0, u, args.t, args.dt)
    _write_csv(args.out_csv, traj.write_csv)
    return EXIT_OK


def cmd_steer(args) -> int:
    sf = io.load_system(args.system)
    u = steer(sf.system, args.x0, args.x1, args.t1, args.steps, args.tol)
    if args.out_csv or not args.json:
        _write_csv(args.out_csv, lambda fh: io.write_control_csv(fh, u))
    traj = simulate(sf.system, args.x0, u, args.t1, args.t1 / args.steps)
    x1 = np.asarray(args.x1)
    err = float(np.max(np.abs(traj.final - x1)))
    rel = err / (1.0 + float(np.max(np.abs(x1))))
    if args.json:
        report = io.make_report("steer", {"system": str(args.system), "x0": args.x0, "x1": args.x1,
                                          "t1": args.t1, "steps": args.steps, "out_csv": args.out_csv},
                                {"endpoint": traj.final.tolist(), "endpoint_error": err,
                                 "relative_endpoint_error": rel}, _tolerances(args))
        print(json.dumps(report, indent=2))
    else:
        print(f"endpoint error {err:.3e} (relative {rel:.3e})", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    sf = io.load_system(args.system)
    scheme = make_scheme(sf.system.a, io.load_m(args.m_file), args.exact_tol)
    pres = verify_preservation(sf.system, scheme, args.tol)
    x0 = np.arange(1.0, sf.system.n + 1)
    disc = lumped_trajectory_check(sf.system, scheme, x0, ControlSignal.zero(sf.system.r), 1.0, 1e-3)
    results = {"preservation": _preservation_dict(pres), "residual": scheme.residual,
               "trajectory_discrepancy": disc, "trajectory_x0": x0.tolist()}
    report = io.make_report("verify", {"system": str(args.system), "m_file": args.m_file}, results,
                            dict(_tolerances(args), exact_tol=scheme.exact_tol))
    _emit(args, report, [_preservation_line(pres),
                         f"residual {scheme.residual:.3e}; max |M x(t) - xhat(t)| on [0, 1] = {disc:.3e}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="relative singular-value cutoff for rank decisions")
    common.add_argument("--json", action="store_true", help="emit a machine-readable JSON report")

    p = argparse.ArgumentParser(prog="exactlump", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="controllability/observability rank tests")
    s.add_argument("system")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("lump", parents=[common], help="lump a system with a given or eigenvector-built M")
    s.add_argument("system")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--m-file")
    g.add_argument("--eigvecs", type=_ints, help="1-based eigenvector indices, ascending eigenvalue order")
    s.add_argument("--mix", type=_floats, help="row-major entries of the l x l mixing matrix N")
    s.add_argument("--exact-tol", type=float, default=DEFAULT_EXACT_TOL)
    s.add_argument("--out", help="write the lumped system file here")
    s.set_defaults(func=cmd_lump)

    s = sub.add_parser("mmatrix", parents=[common], help="M-matrix classification of A")
    s.add_argument("system")
    s.add_argument("--s", type=float, default=None, help="override the scale s in A = -s(I - T)")
    s.set_defaults(func=cmd_mmatrix)

    s = sub.add_parser("gen-chain", parents=[common], help="write a diffusion-chain system file")
    s.add_argument("n", type=int)
    s.add_argument("k", type=float)
    s.add_argument("--out")
    s.add_argument("--network-out", help="also write the reaction network JSON here")
    s.set_defaults(func=cmd_gen_chain)

    s = sub.add_parser("simulate", parents=[common], help="RK4 trajectory as CSV")
    s.add_argument("system")
    s.add_argument("--x0", type=_floats, required=True)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--u-file", help="piecewise-constant control CSV (t,u1,...)")
    s.add_argument("--out-csv")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("steer", parents=[common], help="minimum-energy control from x0 to x1")
    s.add_argument("system")
    s.add_argument("--x0", type=_floats, required=True)
    s.add_argument("--x1", type=_floats, required=True)
    s.add_argument("--t1", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=400)
    s.add_argument("--out-csv")
    s.set_defaults(func=cmd_steer)

    s = sub.add_parser("verify", parents=[common], help="check controllability preservation for an M")
    s.add_argument("system")
    s.add_argument("--m-file", required=True)
    s.add_argument("--exact-tol", type=float, default=DEFAULT_EXACT_TOL)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LumpingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
