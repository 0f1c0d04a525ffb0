"""Command-line front end.

Every command writes a header of ``#``-prefixed manifest lines (command,
spec digest, seed, tolerances, version) followed by its table or report, so
two runs with the same manifest produce byte-identical output.

Exit codes: 0 success, 2 validation error, 3 optimiser did not converge.
"""

import argparse
import dataclasses
import io
import json
import math
import sys

import numpy as np

from opq import __version__, config
from opq.channels import CLASSICAL, Einselection, apply, classify_unitary
from opq.entropy import discord_min
from opq.optimizer import OptimizerConfig
from opq.protocols import SweepRow, dense_coding_sweep, grid as make_grid
from opq.quantumness import (
    decomposition_terms,
    integrand,
    power_sweep,
    quantumness,
    regularized_ratio,
)
from opq.specio import (
    SpecError,
    channel_from_spec,
    export_channel,
    load_json,
    parse_chain,
    parse_state,
    spec_digest,
    state_from_doc,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGED = 3


def fmt(x):
    """17 significant digits; ``inf`` for infinity."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def encode_state(psi):
    """Amplitudes as ``re:im`` pairs, global phase fixed so the first large entry is real positive."""
    psi = np.asarray(psi, dtype=complex)
    k = int(np.argmax(np.abs(psi) > 1e-9))
    if abs(psi[k]) > 0:
        psi = psi * (abs(psi[k]) / psi[k])
    return " ".join(f"{fmt(z.real)}:{fmt(z.imag)}" for z in np.round(psi, 12))


class Output:
    def __init__(self, command, args, spec_doc=None):
        self.command = command
        tol = dataclasses.asdict(config.TOL)
        manifest = {
            "command": command,
            "args": _canonical_args(args),
            "spec_digest": spec_digest(spec_doc) if spec_doc is not None else None,
            "seed": getattr(args, "seed", None),
            "tolerances": tol,
            "version": __version__,
        }
        self.manifest = manifest
        self.header = [
            f"# opq {command}",
            f"# version: {__version__}",
            f"# args: {json.dumps(manifest['args'], sort_keys=True)}",
            f"# spec_digest: {manifest['spec_digest']}",
            f"# seed: {manifest['seed']}",
            f"# tolerances: {json.dumps(tol, sort_keys=True)}",
        ]

    def text(self, lines):
        return "\n".join(self.header + list(lines)) + "\n"

    def csv(self, header, rows):
        out = io.StringIO()
        for line in self.header:
            out.write(line + "\n")
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_cell(v) for v in row) + "\n")
        return out.getvalue()


def _cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return fmt(v)


def _canonical_args(args):
    skip = {"out", "func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument resolution -----------------------------------------------------


def _named_params(args):
    params = {}
    mapping = {"gamma": "gamma", "mu": "mu", "p": "p", "lam": "lambda", "phi": "phi"}
    for flag, key in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            params[key] = value
    return params


def resolve_spec(args, substitute=None):
    """Channel spec document from ``--named`` / ``--chain`` / ``--kraus-file``."""
    chosen = [x for x in (args.named, args.chain, args.kraus_file) if x]
    if len(chosen) != 1:
        raise SpecError("give exactly one of --named, --chain, --kraus-file")
    if args.named:
        doc = {"name": args.named, "params": _named_params(args)}
        if substitute is not None:
            from opq.specio import NAMED, canonical_name

            pnames = NAMED[canonical_name(args.named)][1]
            if len(pnames) != 1:
                raise SpecError(f"cannot sweep {args.named}: it has parameters {pnames}")
            doc["params"] = {pnames[0]: substitute}
        if args.dims:
            doc["dims"] = args.dims
        return doc
    if args.chain:
        text = args.chain
        if substitute is not None:
            if "{p}" not in text:
                raise SpecError("sweep chains need a '{p}' placeholder for the swept parameter")
            text = text.replace("{p}", repr(float(substitute)))
        return parse_chain(text)
    if substitute is not None:
        raise SpecError("sweeps need --named or a --chain template; a Kraus file has no free parameter")
    return load_json(args.kraus_file)


def resolve_einselection(args, dims):
    mode = args.einselection
    if mode == "full":
        factors = tuple(range(len(dims)))
    elif mode in ("b-side", "a-side"):
        if len(dims) != 2:
            raise SpecError(f"--einselection {mode} needs a bipartite channel, got dims {list(dims)}")
        factors = (1,) if mode == "b-side" else (0,)
    else:
        raise SpecError(f"unknown einselection mode {mode!r}")
    bases = {}
    if args.basis_rotation:
        from opq.specio import decode_matrix

        doc = load_json(args.basis_rotation)
        if isinstance(doc, dict):
            bases = {int(k): decode_matrix(v, f"basis_rotation[{k}]") for k, v in doc.items()}
        else:
            m = decode_matrix(doc, "basis_rotation")
            bases = {k: m for k in factors}
    try:
        return Einselection.on(dims, factors, bases)
    except ValueError as exc:
        raise SpecError(f"einselection: {exc}") from None


def optimizer_config(args):
    return OptimizerConfig(starts=args.starts, max_iterations=args.max_iterations, seed=args.seed)


def resolve_state(args, dim):
    if args.state_file:
        rho = state_from_doc(load_json(args.state_file))
    elif args.state:
        rho = parse_state(args.state, dim)
    else:
        raise SpecError("give --state or --state-file")
    if dim is not None and rho.shape != (dim, dim):
        raise SpecError(f"state has dimension {rho.shape[0]}, channel expects {dim}")
    return rho


# -- commands --------------------------------------------------------------


def cmd_eval(args):
    doc = resolve_spec(args)
    ch = channel_from_spec(doc)
    gamma = resolve_einselection(args, ch.dims)
    rho = resolve_state(args, ch.dim)
    value = integrand(ch, gamma, rho)
    dist, gen = decomposition_terms(ch, gamma, rho)
    out = Output("eval", args, doc)
    lines = [
        f"channel: {ch.name}",
        f"integrand: {fmt(value)}",
        f"distinguishing: {fmt(dist)}",
        f"generating: {fmt(gen)}",
    ]
    if value.is_infinite:
        lines.append(f"witness: infinite ({value.witness})")
    _write(out.text(lines), args.out)
    return EXIT_OK


def _report_lines(rep):
    lines = [
        f"W: {fmt(rep.w_value)}",
        f"witness: {encode_state(rep.witness_state)}",
        f"generating_max: {fmt(rep.generating_power_max.value)}",
        f"generating_witness: {encode_state(rep.generating_power_max.witness)}",
        f"distinguishing_max: {fmt(rep.distinguishing_power_max.value)}",
        f"distinguishing_witness: {encode_state(rep.distinguishing_power_max.witness)}",
        f"dominant: {rep.dominant}",
        f"converged: {'true' if rep.converged else 'false'}",
    ]
    if rep.shortcut:
        lines.append(f"shortcut: {rep.shortcut}")
    if rep.w_value.is_infinite:
        lines.append(f"infinity_witness: {rep.w_value.witness}")
    return lines


SWEEP_HEADER = [
    "parameter",
    "w",
    "generating_max",
    "distinguishing_max",
    "dominant",
    "witness",
    "generating_witness",
    "distinguishing_witness",
]


def cmd_quantumness(args):
    doc = resolve_spec(args)
    ch = channel_from_spec(doc)
    gamma = resolve_einselection(args, ch.dims)
    rep = quantumness(ch, gamma, optimizer_config(args))
    out = Output("quantumness", args, doc)
    text = out.text([f"channel: {ch.name}"] + _report_lines(rep))
    sys.stdout.write(text)
    if args.out:
        row = [
            math.nan,
            rep.w_value,
            rep.generating_power_max.value,
            rep.distinguishing_power_max.value,
            rep.dominant,
            encode_state(rep.witness_state),
            encode_state(rep.generating_power_max.witness),
            encode_state(rep.distinguishing_power_max.witness),
        ]
        _write(out.csv(SWEEP_HEADER, [row]), args.out)
    return EXIT_OK if rep.converged else EXIT_NONCONVERGED


def _parse_grid(text):
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise SpecError(f"--grid must look like start:stop:step, got {text!r}") from None
    try:
        return make_grid(a, b, step)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def cmd_sweep(args):
    points = _parse_grid(args.grid)
    template = resolve_spec(args, substitute=points[0])
    digest_doc = {"template": args.chain or args.named or args.kraus_file, "grid": args.grid}
    dims = channel_from_spec(template).dims
    gamma = resolve_einselection(args, dims)
    cfg = optimizer_config(args)
    rows = power_sweep(lambda p: channel_from_spec(resolve_spec(args, substitute=p)), points, gamma, cfg)
    out = Output("sweep", args, digest_doc)
    table = [
        [r.parameter, r.w, r.generating_max, r.distinguishing_max, r.dominant,
         encode_state(r.witness), encode_state(r.generating_witness), encode_state(r.distinguishing_witness)]
        for r in rows
    ]
    _write(out.csv(SWEEP_HEADER, table), args.out)
    return EXIT_OK


def cmd_dense_coding(args):
    points = _parse_grid(args.grid)
    rows = dense_coding_sweep(points, d=args.d)
    out = Output("dense-coding", args, {"grid": args.grid, "d": args.d})
    _write(out.csv(SweepRow.header(), [r.values() for r in rows]), args.out)
    return EXIT_OK


def cmd_discord(args):
    doc = None
    if args.named or args.chain or args.kraus_file:
        doc = resolve_spec(args)
        ch = channel_from_spec(doc)
        rho = apply(ch, resolve_state(args, ch.dim))
    else:
        rho = resolve_state(args, None)
    d_b = 2
    if rho.shape[0] % d_b:
        raise SpecError("discord needs a state on C^dA x C^2")
    dims = [rho.shape[0] // d_b, d_b]
    report = discord_min(rho, dims, optimizer_config(args))
    out = Output("discord", args, doc)
    basis = report.optimal_measurement_basis
    lines = [
        f"dims: {dims}",
        f"zurek_discord: {fmt(report.zurek_value)}",
        f"minimized_discord: {fmt(report.minimized_value)}",
        f"optimal_angles: {fmt(report.optimal_angles[0])} {fmt(report.optimal_angles[1])}",
        f"optimal_basis_vector_0: {encode_state(basis[:, 0])}",
        f"optimal_basis_vector_1: {encode_state(basis[:, 1])}",
        f"conditional_entropy_before: {fmt(report.conditional_entropy_before)}",
        f"conditional_entropy_after: {fmt(report.conditional_entropy_after)}",
    ]
    _write(out.text(lines), args.out)
    return EXIT_OK


def cmd_classify(args):
    doc = resolve_spec(args)
    ch = channel_from_spec(doc)
    if not ch.is_unitary():
        raise SpecError("classify needs a unitary channel (a single unitary Kraus operator)")
    gamma = resolve_einselection(args, ch.dims)
    if len(gamma.dephased) != len(gamma.dims):
        raise SpecError("classify needs --einselection full")
    verdict = classify_unitary(ch.kraus[0], gamma)
    out = Output("classify", args, doc)
    text = "classical" if verdict == CLASSICAL else "nonclassical (W = ∞)"
    _write(out.text([f"channel: {ch.name}", f"classification: {text}"]), args.out)
    return EXIT_OK


def cmd_export(args):
    doc = resolve_spec(args)
    ch = channel_from_spec(doc)
    text = json.dumps(export_channel(ch), indent=1) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_ratio(args):
    a = channel_from_spec(parse_chain(args.first))
    b = channel_from_spec(parse_chain(args.second))
    if not (a.is_unitary() and b.is_unitary()) or a.dims != b.dims:
        raise SpecError("ratio needs two unitaries on the same dims")
    gamma = resolve_einselection(args, a.dims)
    try:
        schedule = [float(x) for x in args.schedule.split(",")]
    except ValueError:
        raise SpecError(f"--schedule must be comma-separated numbers, got {args.schedule!r}") from None
    rep = regularized_ratio(a.kraus[0], b.kraus[0], gamma, schedule, optimizer_config(args))
    out = Output("ratio", args, {"first": args.first, "second": args.second})
    rows = list(zip(rep.schedule, rep.w_first, rep.w_second, rep.ratios))
    text = out.csv(["mu", "w_first", "w_second", "ratio"], rows)
    text += f"# extrapolated: {fmt(rep.extrapolated)}\n# monotone: {rep.monotone}\n# converged: {rep.converged}\n"
    _write(text, args.out)
    return EXIT_OK if rep.converged else EXIT_NONCONVERGED


# -- parser ----------------------------------------------------------------


def _dims(text):
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}") from None
    return dims


def _add_channel(p, required=True):
    g = p.add_argument_group("channel")
    g.add_argument("--named", help="named channel, e.g. amplitude_damping, discord_map, hadamard")
    g.add_argument("--chain", help="composition string, e.g. 'H,amplitude_damping(0.75),H'")
    g.add_argument("--kraus-file", help="JSON channel spec (explicit Kraus, named, chain or tensor)")
    g.add_argument("--gamma", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--p", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--phi", type=float)
    g.add_argument("--dims", type=_dims, help="factor dimensions for dimension-flexible named channels")


def _add_einselection(p):
    p.add_argument("--einselection", default="full", choices=["full", "b-side", "a-side"])
    p.add_argument("--basis-rotation", help="JSON unitary (or {factor: unitary}) defining the einselected basis")


def _add_optimizer(p, starts=64):
    p.add_argument("--starts", type=int, default=starts)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=2000)


def _add_state(p):
    p.add_argument("--state", help="state label: 01, +1, phi+, mixed, classical:p0,p1,..., k:<index>")
    p.add_argument("--state-file", help="JSON state: {'amplitudes': [...]} or {'density': [[...]]}")


def build_parser():
    parser = argparse.ArgumentParser(prog="opq", description="Quantumness of quantum operations.")
    parser.add_argument("--version", action="version", version=f"opq {__version__}")
    parser.add_argument("--tolerance-file", help=f"JSON tolerance overrides (also ${config.TOLERANCE_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="integrand and its two terms at one state")
    _add_channel(p)
    _add_state(p)
    _add_einselection(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("quantumness", help="maximise the integrand and both powers")
    _add_channel(p)
    _add_einselection(p)
    _add_optimizer(p)
    p.add_argument("--out", help="also write a one-row CSV")
    p.set_defaults(func=cmd_quantumness)

    p = sub.add_parser("sweep", help="quantumness along a parameter grid")
    _add_channel(p)
    _add_einselection(p)
    _add_optimizer(p, starts=16)
    p.add_argument("--grid", required=True, help="start:stop:step (inclusive)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dense-coding", help="dense-coding capacities under depolarising noise")
    p.add_argument("--grid", default="0:1:0.05")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dense_coding)

    p = sub.add_parser("discord", help="Zurek and minimised discord of a two-party state")
    _add_channel(p)
    _add_state(p)
    _add_optimizer(p, starts=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_discord)

    p = sub.add_parser("classify", help="classical / nonclassical verdict for a unitary")
    _add_channel(p)
    _add_einselection(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("export", help="write any channel as an explicit-Kraus JSON spec")
    _add_channel(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("ratio", help="regularised quantumness ratio of two unitaries")
    p.add_argument("--first", required=True, help="chain string for the first unitary")
    p.add_argument("--second", required=True, help="chain string for the second unitary")
    p.add_argument("--schedule", default="0.9,0.99,0.999")
    _add_einselection(p)
    _add_optimizer(p, starts=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = config.get_tolerances()
    try:
        if args.tolerance_file:
            config.set_tolerances(config.load_tolerances(args.tolerance_file))
        return args.func(args)
    except (SpecError, ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"opq {args.command}: error: {exc}\n")
        return EXIT_VALIDATION
    finally:
        config.set_tolerances(previous)


if __name__ == "__main__":
    sys.exit(main())
