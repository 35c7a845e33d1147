"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 dimension mismatch, 4 solver
failure, 5 a checked bound or validity condition failed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import certify as cert
from . import secretshare as ss
from .channels import (DimensionError, KrausChannel, SubsystemDecomposition, action_deviation, apply,
                       identity_channel, restrict, trace_channel, validate_cptp)
from .complement import complement, minimal_dilation
from .diamond import diamond_norm_sdp, entangled_lower_bound, HermitianPreservingMap
from .instances import RHO1, RHO2, Z1, phase_flip_channel, phase_flip_code, phase_flip_complement_action
from .linalg import matrix_unit
from .sdp import FEAS_TOL, GAP_TOL, MAX_ITER, SdpSolveError
from .serialize import (ParseError, channel_from_json, channel_to_json, decomposition_from_json,
                        matrix_to_json, read_json, scheme_from_json, write_json)

EXIT_OK, EXIT_PARSE, EXIT_DIM, EXIT_SOLVER, EXIT_BOUND = 0, 2, 3, 4, 5


@dataclass
class RunReport:
    command: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self, timing: bool = False) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "results": _plain(self.results),
               "tolerances": self.tolerances, "checks": self.checks, "ok": self.ok}
        if timing:
            out["wall_clock"] = self.wall_clock
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj)
    return obj


class Context:
    def __init__(self, args):
        self.args = args
        self.report = RunReport(command=list(args.argv))
        self.report.tolerances = {"tol": args.tol, "gap_tol": GAP_TOL, "feas_tol": FEAS_TOL,
                                  "max_iter": args.max_iter, "seed": args.seed}
        self.lines: list[str] = []

    @property
    def solver(self) -> dict:
        return {"max_iter": self.args.max_iter}

    def load(self, path: str):
        obj, digest = read_json(path)
        self.report.inputs[str(path)] = digest
        return obj

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def check(self, name: str, passed: bool) -> None:
        self.report.checks[name] = bool(passed)
        self.say(f"  [{'pass' if passed else 'FAIL'}] {name}")


def _channel(ctx: Context, path: str) -> KrausChannel:
    return channel_from_json(ctx.load(path))


def _decomposition(ctx: Context, e: KrausChannel) -> SubsystemDecomposition:
    a = ctx.args
    if a.decomp:
        d = decomposition_from_json(ctx.load(a.decomp))
    elif a.subspace:
        text = a.subspace.strip()
        try:
            basis = json.loads(text) if text.startswith("[") else [int(t) for t in text.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad --subspace value: {exc}") from None
        if basis and isinstance(basis[0], list):
            basis = [np.asarray(v, dtype=float) @ np.array([1, 1j]) if np.ndim(v) == 2 else np.asarray(v, dtype=complex)
                     for v in basis]
        d = SubsystemDecomposition.subspace(basis, e.dim_in)
    else:
        d = SubsystemDecomposition.full(1, e.dim_in)
    if d.dim_S != e.dim_in:
        raise DimensionError(f"decomposition lives in dim {d.dim_S}, channel input is {e.dim_in}")
    return d


def cmd_validate(ctx: Context) -> None:
    e = _channel(ctx, ctx.args.path)
    rep = validate_cptp(e, ctx.args.tol)
    ctx.report.results = {"dim_in": e.dim_in, "dim_out": e.dim_out, "num_kraus": e.num_kraus,
                          "tp_deviation": rep.tp_deviation, "cp_deficit": rep.cp_deficit}
    ctx.say(f"channel {e.dim_in} -> {e.dim_out}, {e.num_kraus} Kraus operators")
    ctx.say(f"  trace-preservation deviation {rep.tp_deviation:.3e}, CP deficit {rep.cp_deficit:.3e}")
    ctx.check("cptp", rep.valid)


def cmd_complement(ctx: Context) -> None:
    e = _channel(ctx, ctx.args.path)
    if not validate_cptp(e).valid:
        raise DimensionError("input is not a valid channel")
    comp = complement(e)
    v = minimal_dilation(e)
    ctx.report.results = {"dim_env": comp.dim_out, "minimal_env": v.dim_env,
                          "channel_roundtrip": action_deviation(v.channel(), e),
                          "complement": channel_to_json(comp)}
    ctx.say(f"complement: {e.dim_in} -> {comp.dim_out} (minimal environment {v.dim_env})")
    ctx.check("dilation reproduces channel", ctx.report.results["channel_roundtrip"] <= 1e-9)
    if ctx.args.out:
        write_json(channel_to_json(comp), ctx.args.out)
        ctx.say(f"  written to {ctx.args.out}")


def cmd_diamond(ctx: Context) -> None:
    e, f = _channel(ctx, ctx.args.path_a), _channel(ctx, ctx.args.path_b)
    m = HermitianPreservingMap.difference(e, f)
    lb = entangled_lower_bound(e, f)
    if not np.any(np.abs(m.choi) > 1e-14):
        dd, gap = 0.0, 0.0
    else:
        res = diamond_norm_sdp(m, max_iter=ctx.args.max_iter)
        dd, gap = res.value, res.gap
    ctx.report.results = {"diamond_distance": dd, "entangled_lower_bound": lb, "gap": gap,
                          "distinguishing_probability": 0.5 + 0.25 * dd}
    ctx.say(f"diamond distance {dd:.10f}  (entangled-input lower bound {lb:.10f}, gap {gap:.2e})")
    ctx.check("lower bound <= diamond distance", lb <= dd + 1e-6)


def cmd_certify(ctx: Context) -> None:
    e = _channel(ctx, ctx.args.path)
    d = _decomposition(ctx, e)
    mode = ctx.args.mode
    res = {"dim_A": d.dim_A, "dim_B": d.dim_B}
    if mode in ("private", "correctable"):
        fn = cert.certify_private if mode == "private" else cert.certify_correctable
        r = fn(e, d, **ctx.solver)
        exact = (cert.exact_private_test if mode == "private" else cert.exact_correctable_test)(e, d)
        res.update(epsilon=r.epsilon, degenerate=r.degenerate, exact=exact.passed,
                   diagnostics={k: v for k, v in r.diagnostics.items()})
        ctx.say(f"{mode}: epsilon = {r.epsilon:.3e}  (exact test: {'yes' if exact.passed else 'no'})")
        if ctx.args.eps is not None:
            ctx.check(f"epsilon <= {ctx.args.eps}", r.epsilon <= ctx.args.eps)
    else:
        rep = cert.duality_check(e, d, slack=max(ctx.args.tol, cert.BOUND_SLACK), **ctx.solver)
        res.update(eps_correctable=rep.eps_correctable, eps_private_complement=rep.eps_private_complement,
                   eps_private=rep.eps_private, eps_correctable_complement=rep.eps_correctable_complement,
                   complement_dim=rep.complement_dim)
        ctx.say(f"correctable for E: {rep.eps_correctable:.3e} -> private for E#: "
                f"{rep.eps_private_complement:.3e} (bound {rep.bound_c_to_p:.3e})")
        ctx.say(f"private for E: {rep.eps_private:.3e} -> correctable for E#: "
                f"{rep.eps_correctable_complement:.3e} (bound {rep.bound_p_to_c:.3e})")
        ctx.check("private(E#) <= 2 sqrt(correctable(E))", rep.c_to_p_ok)
        ctx.check("correctable(E#) <= 2 sqrt(private(E))", rep.p_to_c_ok)
    ctx.report.results = res


def cmd_secretshare(ctx: Context) -> None:
    a = ctx.args
    if a.mode == "probe":
        if a.n is None or a.k is None:
            raise ParseError("probe mode needs --n and --k")
        rep = ss.infeasibility_probe(a.n, a.k, trials=a.trials, seed=a.seed)
        ctx.report.results = {"n": a.n, "k": a.k, "violations": rep.violations, "min_violation": rep.min_violation}
        ctx.say(f"(({a.k},{a.n})) probe over {a.trials} random isometric encoders: "
                f"min violation {rep.min_violation:.4f}")
        ctx.check("every violation > 0.1", rep.ok)
        return
    if not a.path:
        raise ParseError("a scheme file is required")
    s = scheme_from_json(ctx.load(a.path))
    if a.mode == "verify":
        rep = ss.verify_threshold(s, a.eps_corr, a.eps_priv)
        ctx.report.results = {"rows": [{"subset": r.label, "kind": r.kind, "epsilon": r.epsilon, "ok": r.ok}
                                       for r in rep.rows]}
        for r in rep.rows:
            ctx.say(f"  {r.label:<16} {r.kind:<12} epsilon {r.epsilon:.3e}")
        ctx.check("threshold requirements", rep.ok)
    else:
        rows = []
        for subset in ss.all_subsets(s.n):
            au = ss.complement_duality_audit(s, subset)
            rows.append({"subset": ss.party_label(subset), "rest": ss.party_label(au.rest),
                         "complementary": au.complementary, "eps_correctable": au.eps_correctable,
                         "eps_private_rest": au.eps_private_rest, "eps_private": au.eps_private,
                         "eps_correctable_rest": au.eps_correctable_rest, "ok": au.ok})
            ctx.say(f"  {rows[-1]['subset']:<16} vs {rows[-1]['rest']:<16} corr {au.eps_correctable:.2e}"
                    f" -> priv(rest) {au.eps_private_rest:.2e}")
            ctx.check(f"audit {rows[-1]['subset']}", au.ok)
        ctx.report.results = {"rows": rows}


def _max_dev(f, g, dim: int) -> float:
    """Largest entrywise gap between ``f`` and ``g`` over the matrix units of ``dim``."""
    return max(float(np.max(np.abs(f(matrix_unit(i, j, dim)) - g(matrix_unit(i, j, dim)))))
               for i in range(dim) for j in range(dim))


def _demo_phase_flip(ctx: Context) -> None:
    e, code = phase_flip_channel(), phase_flip_code()
    comp = complement(e)
    dev = _max_dev(lambda x: apply(comp, x), phase_flip_complement_action, 4)
    ctx.say("E(s) = (s + Z1 s Z1)/2 on two qubits; complement from the dilation with Kraus {I, Z1}/sqrt2")
    ctx.say(f"  E#(s) = tr(s) rho1 + tr(s Z1) rho2, rho1 = {RHO1.real.tolist()}, rho2 = {RHO2.real.tolist()}")
    ctx.say(f"  max deviation over the operator basis: {dev:.2e}")
    cc = cert.certify_correctable(e, code, **ctx.solver)
    cp = cert.certify_private(comp, code, **ctx.solver)
    ctx.say(f"  code span{{|00>,|01>}}: correctable epsilon {cc.epsilon:.2e}, private for E# epsilon {cp.epsilon:.2e}")
    emb = code.embed
    proj = RHO1 + RHO2
    pdev = _max_dev(lambda x: apply(comp, emb @ x @ emb.conj().T), lambda x: np.trace(x) * proj, 2)
    ctx.report.results = {"complement_deviation": dev, "eps_correctable": cc.epsilon,
                          "eps_private_complement": cp.epsilon, "projector_deviation": pdev,
                          "rho1": RHO1, "rho2": RHO2, "Z1": Z1}
    ctx.check("complement matches tr(s) rho1 + tr(s Z1) rho2", dev <= 1e-9)
    ctx.check("code is 0-correctable for E", cc.epsilon <= 1e-6)
    ctx.check("code is 0-private for E#", cp.epsilon <= 1e-6)
    ctx.check("E#(s) = tr(s) P on the code", pdev <= 1e-9)


def _demo_lemma1(ctx: Context) -> None:
    rows = {}
    for d in (1, 2, 3, 4):
        comp = complement(identity_channel(d))
        dev = action_deviation(comp, trace_channel(d))
        rows[str(d)] = {"dim_out": comp.dim_out, "deviation": dev}
        ctx.check(f"complement(id_{d}) is the trace channel", comp.dim_out == 1 and dev <= 1e-12)
    ctx.report.results = rows


def _demo_cgl23(ctx: Context) -> None:
    s = ss.cgl23_scheme()
    rep = ss.verify_threshold(s)
    for r in rep.rows:
        ctx.say(f"  {r.label:<16} {r.kind:<12} epsilon {r.epsilon:.3e}")
    ctx.report.results = {"rows": [{"subset": r.label, "kind": r.kind, "epsilon": r.epsilon} for r in rep.rows]}
    ctx.check("((2,3)) qutrit scheme meets its threshold", rep.ok)


def cmd_demo(ctx: Context) -> None:
    {"phase-flip": _demo_phase_flip, "lemma1": _demo_lemma1, "cgl23": _demo_cgl23}[ctx.args.name](ctx)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-5, help="slack for checked bounds")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", dest="json_out", help="write a machine-readable report here")
    common.add_argument("--max-iter", type=int, default=MAX_ITER)
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the JSON report")

    p = argparse.ArgumentParser(prog="privcorr", description="Private/correctable subsystem toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check that a channel is CPTP")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("complement", parents=[common], help="complementary channel of a minimal dilation")
    s.add_argument("path")
    s.add_argument("--out")
    s.set_defaults(func=cmd_complement)

    s = sub.add_parser("diamond", parents=[common], help="diamond distance between two channels")
    s.add_argument("path_a")
    s.add_argument("path_b")
    s.set_defaults(func=cmd_diamond)

    s = sub.add_parser("certify", parents=[common], help="certify a subsystem as private/correctable")
    s.add_argument("path")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--decomp", help="decomposition JSON (dim_A, dim_B, embed)")
    g.add_argument("--subspace", help="code basis: indices '0,1' or a JSON list of vectors")
    s.add_argument("--mode", choices=["private", "correctable", "duality"], default="duality")
    s.add_argument("--eps", type=float, help="fail (exit 5) if epsilon exceeds this")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("secretshare", parents=[common], help="threshold secret-sharing audits")
    s.add_argument("path", nargs="?")
    s.add_argument("--mode", choices=["verify", "audit", "probe"], default="verify")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--eps-corr", type=float, default=1e-6)
    s.add_argument("--eps-priv", type=float, default=1e-6)
    s.set_defaults(func=cmd_secretshare)

    s = sub.add_parser("demo", parents=[common], help="worked examples")
    s.add_argument("name", choices=["phase-flip", "lemma1", "cgl23"])
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    ctx = Context(args)
    start = time.perf_counter()
    try:
        args.func(ctx)
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        return _fail(ctx, EXIT_PARSE, "parse", exc)
    except DimensionError as exc:
        return _fail(ctx, EXIT_DIM, "dimension", exc)
    except SdpSolveError as exc:
        return _fail(ctx, EXIT_SOLVER, "solver", exc)
    ctx.report.wall_clock = time.perf_counter() - start
    for line in ctx.lines:
        print(line)
    print(f"{'OK' if ctx.report.ok else 'FAILED'} ({ctx.report.wall_clock:.2f} s)")
    if args.json_out:
        write_json(ctx.report.to_json(timing=args.timing), args.json_out)
    return EXIT_OK if ctx.report.ok else EXIT_BOUND


def _fail(ctx: Context, code: int, kind: str, exc: Exception) -> int:
    err = {"error": kind, "message": str(exc), "exit_code": code, "command": ctx.report.command}
    print(json.dumps(err), file=sys.stderr)
    if getattr(ctx.args, "json_out", None):
        write_json(err, ctx.args.json_out)
    return code


if __name__ == "__main__":
    sys.exit(main())
