"""Command-line front end.

Subcommands: construct, params, girth, transversal, simulate, sweep,
burst-check.  Single results print as JSON; sweeps print as CSV.  Any
verification failure (structure checks, girth mismatch, non-preserved
operator) exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys

from eaqc.channel import ChannelParams
from eaqc.clifford import (
    conjugate,
    group_preserved,
    h_s_cz,
    hadamard_swap,
    logical_action,
    logical_operators,
    s_cz,
    stabilizer_matrix,
)
from eaqc.decoder import DecoderConfig
from eaqc.eacode import (
    StructureCheckFailed,
    build_theorem5,
    build_theorem6,
    build_theorem7,
    build_theorem8,
    build_theorem9,
    build_theorem10,
    girth_floor_of,
    theorem5_selection,
    theorem7_model,
)
from eaqc.gf2 import expand, gfrank
from eaqc.girth import girth_bfs
from eaqc.harness import (
    BurstTooLarge,
    SimConfig,
    burst_oracle,
    run_trials,
    sweep,
    write_csv,
)
from eaqc.models import (
    OrderExhausted,
    theorem6_models,
    theorem8_model,
    theorem9_model,
    theorem10_model,
)

_DECODER_NAMES = {
    "binary": "binary-spa",
    "quat": "quaternary-spa",
    "quat-minsum": "quaternary-minsum",
}

_FAMILIES = ("thm5", "thm6", "thm7", "thm8", "thm9", "thm10")


def _usage_error(message: str) -> SystemExit:
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(2)


def _parse_set(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as err:
        raise _usage_error(f"--set expects comma-separated integers: {err}")


def _require(args, names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise _usage_error(f"--family {args.family} needs {', '.join(missing)}")


def _build_models(args):
    fam = args.family
    if fam == "thm5":
        _require(args, ("p", "l1", "l2"))
        return theorem5_selection(args.p, args.l1, args.l2)
    if fam == "thm6":
        _require(args, ("p", "l1", "l2"))
        return theorem6_models(args.p, args.l1, args.l2)
    if fam == "thm7":
        _require(args, ("p", "l"))
        m = theorem7_model(args.p, args.l)
        return m, m
    if fam == "thm8":
        _require(args, ("l", "w"))
        m = theorem8_model(args.l, args.w)
        return m, m
    _require(args, ("set", "w"))
    build = theorem9_model if fam == "thm9" else theorem10_model
    m = build(_parse_set(args.set), args.w, enforce_scale=not args.reduced)
    return m, m


def _build_code(args):
    fam = args.family
    if fam == "thm5":
        _require(args, ("p", "l1", "l2"))
        return build_theorem5(args.p, args.l1, args.l2)
    if fam == "thm6":
        _require(args, ("p", "l1", "l2"))
        return build_theorem6(args.p, args.l1, args.l2)
    if fam == "thm7":
        _require(args, ("p", "l"))
        return build_theorem7(args.p, args.l)
    if fam == "thm8":
        _require(args, ("l", "w"))
        return build_theorem8(args.l, args.w)
    _require(args, ("set", "w"))
    build = build_theorem9 if fam == "thm9" else build_theorem10
    return build(_parse_set(args.set), args.w, enforce_scale=not args.reduced)


def _bit_rows(m) -> list[str]:
    return ["".join(str(int(b)) for b in row) for row in m.to_dense()]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_construct(args) -> int:
    code = _build_code(args)
    mx, mz = _build_models(args)
    doc = {
        "family": code.family,
        "n": code.n,
        "k": code.k,
        "c": code.c,
        "mx": mx.to_json_dict(),
        "mz": mz.to_json_dict(),
        "hex": _bit_rows(code.hex),
        "hez": _bit_rows(code.hez),
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_params(args) -> int:
    code = _build_code(args)
    mx, mz = _build_models(args)
    doc = {
        "family": code.family,
        "n": code.n,
        "k": code.k,
        "c": code.c,
        "gfrank_hx": gfrank(code.hx),
        "gfrank_hz": gfrank(code.hz),
        "girth_floor": girth_floor_of(mx, None if mz is mx else mz),
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_girth(args) -> int:
    mx, mz = _build_models(args)
    floor = girth_floor_of(mx, None if mz is mx else mz)
    stacked = mx if mz is mx else mx.vstack(mz)
    found = girth_bfs(expand(stacked), cap=8)
    bfs_value = None if found == float("inf") else int(found)
    doc = {"family": args.family.replace("thm", "theorem"),
           "girth_floor": floor, "bfs_cap": 8, "bfs_girth": bfs_value}
    _emit(json.dumps(doc, indent=2), args.out)
    if floor in (4, 6):
        return 0 if bfs_value == floor else 1
    return 0 if bfs_value is None or bfs_value >= 8 else 1


def _cmd_transversal(args) -> int:
    t = stabilizer_matrix(args.p)
    sequences = {
        "hadamard_swap": hadamard_swap(args.p),
        "s_cz": s_cz(args.p),
        "h_s_cz": h_s_cz(args.p),
    }
    preserved = {
        name: group_preserved(t, conjugate(t, seq))
        for name, seq in sequences.items()
    }
    doc = {"p": args.p, "preserved": preserved, "logical_action": {}}
    if all(preserved.values()):
        logs = logical_operators(t)
        for name, seq in sequences.items():
            act = logical_action(t, logs, seq)
            doc["logical_action"][name] = {k: list(v) for k, v in act.items()}
    _emit(json.dumps(doc, indent=2), args.out)
    return 0 if all(preserved.values()) else 1


def _sim_config(args, with_axes: bool) -> SimConfig:
    code = _build_code(args)
    decoder = DecoderConfig(
        _DECODER_NAMES[args.decoder], p_d=args.pd_scalar, l_max=args.lmax
    )
    return SimConfig(
        code=code,
        channel=ChannelParams(args.pd_scalar, args.eta_scalar),
        decoder=decoder,
        trials=args.trials,
        master_seed=args.seed,
        pd_axis=args.pd_list if with_axes else (),
        eta_axis=args.eta_list if with_axes else (),
    )


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as err:
        raise _usage_error(f"expected comma-separated numbers: {err}")


def _cmd_simulate(args) -> int:
    values = _parse_floats(args.pd)
    etas = _parse_floats(args.eta)
    if len(values) != 1 or len(etas) != 1:
        raise _usage_error("simulate takes a single --pd and --eta")
    args.pd_scalar, args.eta_scalar = values[0], etas[0]
    cfg = _sim_config(args, with_axes=False)
    res = run_trials(cfg)
    doc = {
        "family": cfg.code.family,
        "n": cfg.code.n,
        "k": cfg.code.k,
        "c": cfg.code.c,
        "p_d": values[0],
        "eta": etas[0],
        "decoder": cfg.decoder.algorithm,
        "trials": res.trials,
        "failures": res.failures,
        "non_converged": res.non_converged,
        "LER": res.ler,
        "ci_low": res.ci_low,
        "ci_high": res.ci_high,
        "seed": cfg.master_seed,
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_sweep(args) -> int:
    args.pd_list = _parse_floats(args.pd)
    args.eta_list = _parse_floats(args.eta)
    args.pd_scalar = args.pd_list[0] if args.pd_list else 0.0
    args.eta_scalar = args.eta_list[0] if args.eta_list else 0.0
    cfg = _sim_config(args, with_axes=True)
    rows = sweep(cfg)
    _emit(write_csv(rows, None), args.out)
    return 0


def _cmd_burst_check(args) -> int:
    code = _build_code(args)
    decoder = DecoderConfig(_DECODER_NAMES[args.decoder],
                            p_d=_parse_floats(args.pd)[0], l_max=args.lmax)
    rep = burst_oracle(code, args.length, spa_cfg=decoder)
    doc = {
        "family": code.family,
        "n": code.n,
        "burst_len": rep.burst_len,
        "windows": rep.windows,
        "patterns": rep.patterns,
        "oracle_corrected": rep.oracle_corrected,
        "oracle_fraction": rep.oracle_fraction,
        "spa_corrected": rep.spa_corrected,
        "spa_fraction": rep.spa_fraction,
        "oracle_failures": [
            {"x_support": list(xs), "z_support": list(zs)}
            for xs, zs in rep.oracle_failures
        ],
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _add_code_flags(sp) -> None:
    sp.add_argument("--family", required=True, choices=_FAMILIES)
    sp.add_argument("--p", type=int)
    sp.add_argument("--l1", type=int)
    sp.add_argument("--l2", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--w", type=int)
    sp.add_argument("--set", type=str)
    sp.add_argument("--reduced", action="store_true",
                    help="waive the minimum-exponent floor for thm9/thm10")


def _add_sim_flags(sp) -> None:
    sp.add_argument("--pd", type=str, default="0.03")
    sp.add_argument("--eta", type=str, default="0.0")
    sp.add_argument("--trials", type=int, default=5000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--decoder", choices=sorted(_DECODER_NAMES), default="quat")
    sp.add_argument("--lmax", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eaqc",
        description="Construct, verify, and simulate quasi-cyclic "
                    "entanglement-assisted quantum LDPC codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("construct", _cmd_construct),
        ("params", _cmd_params),
        ("girth", _cmd_girth),
    ):
        sp = sub.add_parser(name)
        _add_code_flags(sp)
        sp.add_argument("--out", type=str)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("transversal")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--out", type=str)
    sp.set_defaults(fn=_cmd_transversal)

    for name, fn in (("simulate", _cmd_simulate), ("sweep", _cmd_sweep)):
        sp = sub.add_parser(name)
        _add_code_flags(sp)
        _add_sim_flags(sp)
        sp.add_argument("--out", type=str)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("burst-check")
    _add_code_flags(sp)
    _add_sim_flags(sp)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--out", type=str)
    sp.set_defaults(fn=_cmd_burst_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (StructureCheckFailed, OrderExhausted, BurstTooLarge) as err:
        print(f"verification failure: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
