"""Command-line entry point: ``leraylab <command> ...``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import axisym, gronwall, presets, solver2d, weights
from .config import ConfigError, config_hash, parse_config
from .ledger import Ledger
from .runs import RunDirectory, dumps, output_root


FAMILY_ALIASES = {"radial": "radial_power", "cylindrical": "cylindrical_power"}


def _spec_from_args(args) -> weights.WeightSpec:
    family = weights.Family(FAMILY_ALIASES.get(args.family, args.family))
    form = weights.Form(args.form)
    if family is weights.Family.RADIAL_POWER:
        return weights.WeightSpec.radial(args.gamma, args.dim, form)
    if family is weights.Family.CONSTANT:
        return weights.WeightSpec(family, 0.0, args.dim, form)
    return weights.WeightSpec(family, args.gamma, 3, form)


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    families = list(FAMILY_ALIASES) + [f.value for f in weights.Family]
    p.add_argument("--family", default="radial", choices=families)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=2, choices=(2, 3))
    p.add_argument("--form", default="one_plus_abs", choices=[f.value for f in weights.Form])


def cmd_weights(args) -> int:
    if args.action == "check":
        rep = weights.check_adapted(_spec_from_args(args))
        print(dumps({"adapted": rep.adapted, "records": rep.records()}))
        return 0
    if args.action == "aq":
        spec = _spec_from_args(args)
        cubes = weights.CubeFamily.dyadic(spec.profile_dim, scales=args.scales)
        scan = weights.aq_scan(spec, args.q, cubes)
        finite = weights.aq_finite(scan.value)
        print(dumps({"axiom": f"A_{args.q:g}", "pass": finite, "constant": scan.value,
                     "evidence_scale": max(cubes.half_sides),
                     "per_scale": scan.per_scale}))
        return 0
    phi = weights.WeightSpec.cylindrical(args.gamma)
    psi = weights.WeightSpec.cylindrical(args.delta, weights.Form(args.psi_form))
    rep = weights.check_pair(phi, psi)
    records = [
        {"axiom": "ordering", "pass": rep.ordered, "constant": None, "evidence_scale": 1e4},
        {"axiom": "psi_A2", "pass": rep.psi_a2, "constant": rep.psi_a2_value, "evidence_scale": 2.0 ** 16},
        {"axiom": "gradient", "pass": rep.grad_ok, "constant": rep.grad_constant, "evidence_scale": 1e4},
        {"axiom": "laplacian", "pass": rep.lap_ok, "constant": rep.lap_constant, "evidence_scale": 1e4},
    ]
    print(dumps({"pass": rep.passed, "failures": rep.failures, "records": records}))
    return 0


def cmd_simulate(args) -> int:
    schema = solver2d.RunConfig if args.kind == "2d" else axisym.AxiConfig
    try:
        text = Path(args.config).read_text() if args.config else ""
        cfg = parse_config(text, schema)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.kind == "2d" and args.seed is not None:
        cfg.seed = args.seed
    run = RunDirectory.create(output_root(args.output), f"simulate-{args.kind}", getattr(cfg, "seed", 0))
    run.config_hash = config_hash(cfg)
    run.write_text("config.cfg", Path(args.config).read_text() if args.config else "")
    try:
        if args.kind == "2d":
            res = solver2d.run(cfg, run.path)
            summary = {"t": res.state.t, "energy_drift": solver2d.energy_drift(res.ledger),
                       "pc": solver2d.verify_pc(res.ledger).as_dict()}
        else:
            res = axisym.run_axi(cfg, run.path)
            summary = {"t": res.state.t, "ladyzhenskaya": axisym.ladyzhenskaya_monitor(res.ledger),
                       "max_divergence": res.max_divergence, "min_eta_ratio": res.min_eta_ratio,
                       "coe1": axisym.verify_coe1(res.ledger).as_dict()}
    except (solver2d.BlowUpError, axisym.BlowUpError, weights.ContractError) as exc:
        run.write_report("failure.json", {"error": type(exc).__name__, "message": str(exc)})
        run.finish({"pass": False})
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for p in res.checkpoints:
        run.register(p)
    if res.io_error is None:
        run.register(run.path / "ledger.csv")
    else:
        summary["io_error"] = res.io_error
    run.write_report("summary.json", summary)
    run.finish({"pass": res.io_error is None})
    print(run.path)
    return 0 if res.io_error is None else 1


def cmd_gronwall(args) -> int:
    if args.action == "verify":
        rep = gronwall.verify_envelope(gronwall.GronwallParams(args.A, args.B, args.b, args.T1))
        print(dumps(rep.as_dict()))
        return 0 if rep.passed else 1
    try:
        led = Ledger.read_csv(args.ledger)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = gronwall.fit_envelope(led, args.b, args.column)
    print(dumps(rep.as_dict()))
    return 0 if rep.envelope_holds else 1


def cmd_preset(args) -> int:
    try:
        res = presets.run_preset(args.name, output_root(args.output), args.seed or 0, args.threads)
    except presets.UnknownPreset:
        print(f"error: unknown preset {args.name!r}; choose from {', '.join(presets.PRESETS)}",
              file=sys.stderr)
        return 2
    for o in res.outcomes:
        print(f"{'PASS' if o.passed else 'FAIL'} {o.criterion}: {presets.CRITERIA[o.criterion]}")
    print(res.run_dir.path)
    return res.exit_status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leraylab", description="Weighted Navier-Stokes numerics.")
    ap.add_argument("--output", help="root directory for run outputs (default $LERAYLAB_OUTPUT or ./runs)")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weights", help="check weight axioms")
    wsub = w.add_subparsers(dest="action", required=True)
    for name in ("check", "aq"):
        p = wsub.add_parser(name)
        _add_weight_args(p)
        if name == "aq":
            p.add_argument("--q", type=float, default=2.0)
            p.add_argument("--scales", type=int, default=16)
    p = wsub.add_parser("pair", help="Phi = (1+r)^-gamma against Psi = (1+r)^-delta or (1+r^2)^(-delta/2)")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--psi-form", default="one_plus_sq_half", choices=[f.value for f in weights.Form])
    w.set_defaults(func=cmd_weights)

    s = sub.add_parser("simulate", help="run a solver from a config file")
    s.add_argument("kind", choices=("2d", "axisym"))
    s.add_argument("--config", help="key=value file; omitted keys keep their defaults")
    s.set_defaults(func=cmd_simulate)

    g = sub.add_parser("gronwall", help="envelope checks")
    gsub = g.add_subparsers(dest="action", required=True)
    p = gsub.add_parser("verify")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--T1", type=float, default=1.0)
    p = gsub.add_parser("fit")
    p.add_argument("--ledger", required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--column", default="e_phi_u")
    g.set_defaults(func=cmd_gronwall)

    pr = sub.add_parser("preset", help="run a registered experiment")
    pr.add_argument("name")
    pr.set_defaults(func=cmd_preset)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
