"""Command-line surface: batch workflows over JSON files.

Exit codes: 0 success, 1 negative scientific verdict (no squash, or a map
failed verification), 2 malformed input, 3 feasibility undecided.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import builder, finder, fock, groups, linalg, nogo, povm
from .errors import ConstructionError, SquashkitError, TildeNotVerified

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


def _env_tol(default: float) -> float:
    raw = os.environ.get("SQUASHKIT_TOL")
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise SquashkitError(f"SQUASHKIT_TOL={raw!r} is not a number") from exc
    if value <= 0:
        raise SquashkitError("SQUASHKIT_TOL must be positive")
    return value


def _write_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _parse_sector(text: str) -> fock.FockSector:
    try:
        photons = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise SquashkitError(f"cannot parse sector {text!r}") from exc
    return fock.fock_sector(photons)


def _load_group(name: str) -> groups.FiniteGroup:
    builtin = {
        "c2": lambda: groups.cyclic_group(2),
        "c4": lambda: groups.cyclic_group(4),
        "s3": groups.symmetric_group_s3,
    }
    if name in builtin:
        return builtin[name]()
    return groups.group_from_json(_load_json(name))


def _load_action(path: str | None, group_name: str) -> groups.LabelAction:
    if path is not None:
        return groups.action_from_json(_load_json(path))
    if group_name == "c4":
        return groups.canonical_c4_action()
    if group_name == "c2":
        return groups.c2_basis_swap_action()
    raise SquashkitError(f"no default label action for group {group_name!r}; pass --action")


def _load_povm(path: str) -> povm.Bb84Povm:
    p = povm.povm_from_json(_load_json(path))
    if not povm.validate(p).passed:
        raise SquashkitError(f"{path} is not a valid measurement set")
    return p


def cmd_detector(args) -> int:
    if args.N is None and args.sweep_max is None:
        raise SquashkitError("pass --N or --sweep-max")
    if args.N is not None:
        model = fock.build_detector(_parse_sector(args.N))
        _write_json(fock.detector_to_json(model), args.out)
        return EXIT_OK
    if not 1 <= args.sweep_max <= 8:
        raise SquashkitError("--sweep-max must be between 1 and 8")
    if args.out is None:
        raise SquashkitError("a sweep needs --out pointing at a directory")
    os.makedirs(args.out, exist_ok=True)
    for sector in fock.enumerate_sectors(args.sweep_max):
        model = fock.build_detector(sector)
        name = "detector_N" + "-".join(str(n) for n in sector.photons) + ".json"
        _write_json(fock.detector_to_json(model), os.path.join(args.out, name))
    return EXIT_OK


def _squash_inputs(args):
    if args.sector is not None:
        model = fock.build_detector(_parse_sector(args.sector))
        return model.povm, fock.sector_symmetry(model)
    if args.povm is None:
        raise SquashkitError("pass --sector or --povm")
    p = _load_povm(args.povm)
    sym = None
    if args.unitary is not None:
        u = linalg.matrix_from_json(_load_json(args.unitary))
        sym = groups.C4Symmetry(u=u, k=args.k)
    return p, sym


def cmd_squash(args) -> int:
    p, sym = _squash_inputs(args)
    if args.mode == "construct":
        if sym is None:
            raise SquashkitError("construct needs --sector, or --povm with --unitary")
        tol = args.tol if args.tol is not None else _env_tol(1e-9)
        squash = builder.construct_theorem1(p, sym, tol)
        _write_json(builder.squash_to_json(squash), args.out)
        return EXIT_OK
    tol = args.tol if args.tol is not None else _env_tol(1e-8)
    report = finder.find_squash(p, max_iter=args.max_iter, tol=tol)
    _write_json(finder.report_to_json(report), args.out)
    if report.verdict == "FEASIBLE":
        return EXIT_OK
    if report.verdict == "INFEASIBLE":
        return EXIT_NEGATIVE
    return EXIT_UNDECIDED


def cmd_nogo(args) -> int:
    if args.submode == "m0":
        _write_json(povm.povm_to_json(nogo.counterexample_m0()), args.out)
        return EXIT_OK
    if args.submode == "attack":
        p = _load_povm(args.povm)
        result = nogo.bbm92_attack(p, trials=args.trials, seed=args.seed)
        _write_json(nogo.attack_to_json(result), args.out)
        return EXIT_OK
    group = _load_group(args.group)
    action = _load_action(args.action, args.group)
    base = _load_povm(args.povm)
    symmetrized = nogo.symmetrize(base, group, action)
    if args.submode == "symmetrize":
        _write_json(povm.povm_to_json(symmetrized.tilde), args.out)
        return EXIT_OK
    # pullback; the squash file may also be a finder report wrapping one
    blob = _load_json(args.squash)
    if "kraus" not in blob and blob.get("squash"):
        blob = blob["squash"]
    f_tilde = builder.squash_from_json(blob)
    tol = args.tol if args.tol is not None else _env_tol(1e-8)
    pulled = nogo.pullback_squash(symmetrized, f_tilde, tol)
    _write_json(builder.squash_to_json(pulled), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squashkit",
        description="Squash operators for BB84 threshold detectors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detector", help="build threshold-detector models")
    det.add_argument("--N", help="photon numbers per mode, e.g. 2 or 2,1")
    det.add_argument("--sweep-max", type=int, help="build all sectors with total <= bound")
    det.add_argument("--out", help="output file (or directory for a sweep)")
    det.set_defaults(func=cmd_detector)

    squ = sub.add_parser("squash", help="construct or search for a squash map")
    squ.add_argument("mode", choices=["construct", "find"])
    squ.add_argument("--sector", help="photon numbers per mode, e.g. 2 or 2,1")
    squ.add_argument("--povm", help="measurement-set JSON file")
    squ.add_argument("--unitary", help="cycling-unitary JSON file (construct mode)")
    squ.add_argument("--k", type=int, default=1, help="order divisor, U^(4k) = identity")
    squ.add_argument("--tol", type=float)
    squ.add_argument("--max-iter", type=int, default=20000)
    squ.add_argument("--out")
    squ.set_defaults(func=cmd_squash)

    ngo = sub.add_parser("nogo", help="symmetrization, pullback, attack demo")
    ngo.add_argument("submode", choices=["symmetrize", "pullback", "attack", "m0"])
    ngo.add_argument("--povm", help="measurement-set JSON file")
    ngo.add_argument("--group", default="c4", help="c2, c4, s3, or a JSON file")
    ngo.add_argument("--action", help="label-action JSON file")
    ngo.add_argument("--squash", help="squash JSON for the symmetrized set (pullback)")
    ngo.add_argument("--trials", type=int, default=10000)
    ngo.add_argument("--seed", type=int, default=0)
    ngo.add_argument("--tol", type=float)
    ngo.add_argument("--out")
    ngo.set_defaults(func=cmd_nogo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConstructionError, TildeNotVerified) as exc:
        print(f"squashkit: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (SquashkitError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"squashkit: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
