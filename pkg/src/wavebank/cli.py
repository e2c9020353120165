"""Command line front end.

Subcommands: design, verify, cascade, pyramid, packets, transfer, lift.
Exit status 0 on success, 1 when a verification fails (quadrature check,
Perron-Frobenius check, reconstruction residual), 2 on usage or input
errors.  Numeric defaults are the table in `wavebank.defaults`.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import defaults
from .cascade import scaling_function, wavelet_from_scaling
from .design import (
    ProjectionParam,
    bank_from_projections,
    daubechies4,
    lifting_factorize,
    lifting_recompose,
    LiftingStep,
    six_tap_from_angles,
)
from .fileio import (
    InputFormatError,
    dump_json,
    load_json,
    read_signal_csv,
    write_grid_csv,
    write_signal_csv,
    write_svg_polyline,
)
from .filterbank import (
    FilterBank,
    check_qmf,
    polyphase_from_filters,
)
from .laurent import (
    MatLaurentPoly,
    SingularOnTorusError,
    is_unitary_on_torus,
    k1_class,
)
from .operators import (
    PacketPartition,
    packet_decompose,
    packet_reconstruct,
    pyramid_decompose,
    pyramid_reconstruct,
)
from .transfer import TransferSpec, per_check, spectrum

OK, VERIFY_FAILED, USAGE_ERROR = 0, 1, 2


def _load_bank(path) -> FilterBank:
    obj = load_json(path)
    try:
        return FilterBank.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"{path}: not a filter bank file ({exc})") from exc


def _cmd_design(args) -> int:
    if args.daubechies4:
        bank = daubechies4()
    elif args.six_tap is not None:
        bank = six_tap_from_angles(args.six_tap[0], args.six_tap[1])
    elif args.projections:
        obj = load_json(args.projections)
        try:
            params = [
                ProjectionParam(float(p["lambda"]), float(p["theta"]))
                for p in obj["projections"]
            ]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(
                f"{args.projections}: expected {{'projections': "
                f"[{{'lambda': .., 'theta': ..}}, ...]}} ({exc})"
            ) from exc
        bank = bank_from_projections(params)
    else:
        print("design: choose --projections, --daubechies4 or --six-tap", file=sys.stderr)
        return USAGE_ERROR
    dump_json(bank.to_json(), args.output)
    report = check_qmf(bank, args.grid, args.tol)
    print(f"wrote {args.output} (quadrature residual {report.max_residual:.3e})")
    return OK


def _cmd_verify(args) -> int:
    failures = 0
    if args.random_banks:
        rng = np.random.default_rng(args.seed)
        banks = []
        for _ in range(args.random_banks):
            k = int(rng.integers(0, 9))
            params = [
                ProjectionParam(float(rng.uniform()), float(rng.uniform(0, 2 * math.pi)))
                for _ in range(k)
            ]
            banks.append((f"random(k={k})", bank_from_projections(params)))
    else:
        if not args.bank:
            print("verify: provide a bank file or --random-banks", file=sys.stderr)
            return USAGE_ERROR
        banks = [(str(args.bank), _load_bank(args.bank))]
    for name, bank in banks:
        qmf = check_qmf(bank, args.grid, args.tol)
        A = polyphase_from_filters(bank)
        unit = is_unitary_on_torus(A, args.grid, args.tol)
        try:
            winding = k1_class(A, args.grid)
            winding_txt = str(winding)
        except SingularOnTorusError:
            winding_txt = "undefined (det vanishes on torus)"
        agree = qmf.passed == unit.passed
        status = "ok" if (qmf.passed and unit.passed and agree) else "FAIL"
        print(
            f"{name}: {status} quadrature residual {qmf.max_residual:.3e} "
            f"(lowpass {'ok' if qmf.lowpass_ok else 'off'}), polyphase residual "
            f"{unit.max_residual:.3e}, winding class {winding_txt}"
        )
        if not (qmf.passed and unit.passed):
            failures += 1
        if not agree:
            print(f"{name}: quadrature and polyphase verdicts disagree", file=sys.stderr)
            failures += 1
    return VERIFY_FAILED if failures else OK


def _cmd_cascade(args) -> int:
    bank = _load_bank(args.bank)
    result = scaling_function(bank, args.j, args.iters)
    write_grid_csv(result.phi, args.output)
    if args.plot:
        write_svg_polyline(result.phi.x(), result.phi.value_array().real, args.plot)
    if args.psi_prefix:
        for i, psi in enumerate(wavelet_from_scaling(bank, result.phi), start=1):
            write_grid_csv(psi, f"{args.psi_prefix}{i}.csv")
            if args.plot:
                stem = Path(args.plot)
                write_svg_polyline(
                    psi.x(),
                    psi.value_array().real,
                    stem.with_name(f"{stem.stem}_psi{i}{stem.suffix}"),
                )
    status = "converged" if result.converged else (
        "diverged" if result.diverged else "not converged"
    )
    last = result.diffs[-1] if result.diffs else float("nan")
    print(
        f"cascade {status} after {result.iterations} iterations "
        f"(last squared L2 diff {last:.3e}); wrote {args.output}"
    )
    return OK if result.converged else VERIFY_FAILED


def _cmd_pyramid(args) -> int:
    bank = _load_bank(args.bank)
    signal = read_signal_csv(args.signal)
    dec = pyramid_decompose(signal, bank, args.levels)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_signal_csv(dec.coarse, outdir / "coarse.csv")
    n_files = 1
    for level, bands in enumerate(dec.details, start=1):
        for band, sig in enumerate(bands, start=1):
            write_signal_csv(sig, outdir / f"detail_{level}_{band}.csv")
            n_files += 1
    recon = pyramid_reconstruct(dec, bank)
    err = (recon - signal).norm()
    print(f"wrote {n_files} band files to {outdir}; reconstruction error {err:.3e}")
    return OK if err <= args.tol * max(1.0, signal.norm()) else VERIFY_FAILED


def _cmd_packets(args) -> int:
    bank = _load_bank(args.bank)
    signal = read_signal_csv(args.signal)
    if args.partition:
        obj = load_json(args.partition)
        try:
            partition = PacketPartition.from_leaves(obj["leaves"])
        except (KeyError, TypeError) as exc:
            raise InputFormatError(
                f"{args.partition}: expected {{'leaves': [[k, n], ...]}} ({exc})"
            ) from exc
    else:
        partition = PacketPartition.full(args.depth, bank.scale_n)
    leaf_map = packet_decompose(signal, bank, partition)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for (k, n), sig in sorted(leaf_map.items()):
        write_signal_csv(sig, outdir / f"{k}_{n}.csv")
    recon = packet_reconstruct(leaf_map, bank, partition)
    err = (recon - signal).norm()
    print(f"wrote {len(leaf_map)} leaves to {outdir}; reconstruction error {err:.3e}")
    return OK if err <= args.tol * max(1.0, signal.norm()) else VERIFY_FAILED


def _cmd_transfer(args) -> int:
    bank = _load_bank(args.bank)
    spec = TransferSpec.for_bank(bank)
    report = spectrum(spec)
    payload = report.to_json()
    if args.per:
        payload["per"] = per_check(bank, n_max=args.n_max).to_json()
    dump_json(payload, args.output)
    leading = ", ".join(f"{l.real:+.6f}{l.imag:+.6f}j" for l in report.eigenvalues[:4])
    print(
        f"wrote {args.output}; peripheral spectrum "
        f"{'is {1} (simple)' if report.pf_holds else 'violates the PF condition'}; "
        f"leading eigenvalues [{leading}]"
    )
    if args.per and not payload["per"]["is_constant_1"]:
        print(f"periodization deviates from 1 by {payload['per']['max_dev_from_1']:.3e}")
    ok = report.pf_holds and (not args.per or payload["per"]["is_constant_1"])
    return OK if ok else VERIFY_FAILED


def _cmd_lift(args) -> int:
    obj = load_json(args.matrix)
    if args.recompose:
        try:
            steps = [LiftingStep.from_json(s) for s in obj["steps"]]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"{args.matrix}: not a steps file ({exc})") from exc
        A = lifting_recompose(steps)
        dump_json(A.to_json(), args.output)
        print(f"recomposed {len(steps)} steps into {args.output}")
        return OK
    try:
        A = MatLaurentPoly.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputFormatError(f"{args.matrix}: not a matrix file ({exc})") from exc
    steps = lifting_factorize(A)
    dump_json({"steps": [s.to_json() for s in steps]}, args.output)
    resid = max(
        (A - lifting_recompose(steps)).entry(i, j).max_abs_coeff()
        for i in range(2)
        for j in range(2)
    )
    print(f"wrote {len(steps)} steps to {args.output} (recomposition residual {resid:.3e})")
    return OK if resid <= 1e-9 else VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebank",
        description="design, verify and exercise wavelet filter banks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="construct a filter bank and write it as JSON")
    p.add_argument("--projections", help="JSON file of projection parameters")
    p.add_argument("--daubechies4", action="store_true", help="the four-tap bank")
    p.add_argument("--six-tap", nargs=2, type=float, metavar=("THETA", "RHO"))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--grid", type=int, default=defaults.GRID_SIZE)
    p.add_argument("--tol", type=float, default=defaults.TOL)
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("verify", help="quadrature + polyphase unitarity check")
    p.add_argument("bank", nargs="?", help="filter bank JSON file")
    p.add_argument("--random-banks", type=int, default=0, metavar="K",
                   help="verify K random projection-designed banks instead")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid", type=int, default=defaults.GRID_SIZE)
    p.add_argument("--tol", type=float, default=defaults.TOL)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cascade", help="iterate the scaling-function cascade")
    p.add_argument("bank")
    p.add_argument("--j", type=int, default=defaults.J_LEVEL, help="grid level")
    p.add_argument("--iters", type=int, default=defaults.ITERS)
    p.add_argument("-o", "--output", required=True, help="CSV output for phi")
    p.add_argument("--plot", help="SVG polyline output")
    p.add_argument("--psi-prefix", help="also write wavelets to PREFIX<i>.csv")
    p.set_defaults(func=_cmd_cascade)

    p = sub.add_parser("pyramid", help="multilevel analyze/reconstruct a signal")
    p.add_argument("bank")
    p.add_argument("--signal", required=True, help="CSV signal (index,re,im)")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--tol", type=float, default=defaults.TOL)
    p.set_defaults(func=_cmd_pyramid)

    p = sub.add_parser("packets", help="wavelet packet transform of a signal")
    p.add_argument("bank")
    p.add_argument("--signal", required=True)
    p.add_argument("--partition", help="JSON {'leaves': [[k,n],...]}")
    p.add_argument("--depth", type=int, default=3, help="full partition depth")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--tol", type=float, default=defaults.TOL)
    p.set_defaults(func=_cmd_packets)

    p = sub.add_parser("transfer", help="transfer-operator spectrum report")
    p.add_argument("bank")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--per", action="store_true", help="include periodization check")
    p.add_argument("--n-max", type=int, default=defaults.N_MAX)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("lift", help="lifting factorization of an SL2 matrix")
    p.add_argument("matrix", help="matrix JSON (or steps JSON with --recompose)")
    p.add_argument("--recompose", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_lift)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, SingularOnTorusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
