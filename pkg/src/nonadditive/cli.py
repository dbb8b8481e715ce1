"""Command-line entry point: ``nonadditive <subcommand> ...``.

Exit codes are shared by every subcommand: 0 when everything checks out, 1
when a mathematical check fails, 2 for usage, parse and I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable

from . import analysis, discovery, formats, stabilizer, symmetry
from .analysis import CodeError, CodeProjector
from .operators import PauliExpansion
from .pauli import PauliParseError

OK, CHECK_FAILED, USAGE_ERROR = 0, 1, 2

log = logging.getLogger("nonadditive")


class InputError(Exception):
    """Anything that should end the run with exit code 2."""


# output helpers --------------------------------------------------------------------------


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            yield from _flatten({str(i): item for i, item in enumerate(v)}, key + ".")
        else:
            yield key, v


def emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for key, value in _flatten(payload):
            print(f"{key}: {json.dumps(value)}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load_expansion(path: str) -> PauliExpansion:
    try:
        return formats.parse_expansion(_read(path))
    except formats.FormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _verified_projector(m: PauliExpansion, tol: float | None) -> tuple[CodeProjector | None, dict]:
    """The projector if m is one, otherwise None with the failed check as payload."""
    check = analysis.verify_projector(m, tol)
    if not check.is_projector:
        return None, {
            "n": m.n,
            "trace": float(check.trace),
            "projector_residual": float(check.residual),
            "checks": {"projector": False},
        }
    return CodeProjector.from_expansion(m, tol), {}


# subcommands -------------------------------------------------------------------------------


def cmd_build(args) -> int:
    p = analysis.paper_projector()
    if args.out:
        _write(args.out, formats.format_expansion(p.expansion))
    rep = analysis.report(p, basis=analysis.paper_basis(), target_A=analysis.PAPER_ENUMERATOR)
    emit(rep.to_dict(), args.format)
    return OK if rep.passed else CHECK_FAILED


def cmd_verify(args) -> int:
    m = _load_expansion(args.input)
    p, failure = _verified_projector(m, args.tol)
    if p is None:
        emit(failure, args.format)
        return CHECK_FAILED
    rep = analysis.report(p, tol=args.tol)
    emit(rep.to_dict(), args.format)
    ok = all(rep.checks[k] for k in ("projector", "erasure", "enumerator"))
    return OK if ok else CHECK_FAILED


def cmd_enumerator(args) -> int:
    m = _load_expansion(args.input)
    A = analysis.enumerator_A(m)
    B = analysis.enumerator_B(m)
    K = m.trace()
    payload = {
        "n": m.n,
        "trace": analysis._json_number(K),
        "enumerator_A": [analysis._json_number(a) for a in A],
        "enumerator_B": [analysis._json_number(b) for b in B],
        "polynomial_A": A.polynomial(),
    }
    emit(payload, args.format)
    return OK


def cmd_discover(args) -> int:
    cfg = discovery.DiscoveryConfig(
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol if args.tol is not None else 1e-8,
        workers=args.workers,
    )
    result = discovery.discover(cfg)
    if args.trace:
        _write(args.trace, result.trace_text())
    payload = {"seed": cfg.seed, "restarts": cfg.restarts, "max_iters": cfg.max_iters}
    if not result.success:
        payload["converged"] = False
        payload["statuses"] = [t.status for t in result.traces]
        emit(payload, args.format)
        if not args.trace:
            sys.stderr.write(result.trace_text())
        return CHECK_FAILED
    if args.out:
        _write(args.out, formats.format_expansion(result.projector.expansion))
    payload["converged"] = True
    payload["restart"] = result.restart
    payload.update(result.report.to_dict())
    emit(payload, args.format)
    return OK


def cmd_symmetry(args) -> int:
    m = _load_expansion(args.input)
    gens = symmetry.paper_generators(args.level)
    tol = args.tol if args.tol is not None else (0.0 if m.is_exact else 1e-10)
    results = [symmetry.is_symmetry(g, m, tol) for g in gens]
    payload = {
        "level": args.level,
        "generators": [
            {"index": i, "symmetry": ok, "action": symmetry.format_symmetry(g).replace("\n", "; ")}
            for i, (g, ok) in enumerate(zip(gens, results))
        ],
        "group_order": symmetry.group_order(gens),
        "permutation_image_order": symmetry.permutation_image_order(gens),
    }
    emit(payload, args.format)
    return OK if all(results) else CHECK_FAILED


def cmd_basis(args) -> int:
    p = analysis.paper_projector()
    basis = analysis.paper_basis()
    fix_err, gram_err = analysis.basis_check(p, basis)
    ok = fix_err <= 1e-12 and gram_err <= 1e-12
    log.info("gram residual %.3e, fixed-point residual %.3e", gram_err, fix_err)
    out = Path(args.out)
    files = []
    if ok:
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise InputError(f"cannot create {out}: {exc.strerror or exc}") from None
        for i, v in enumerate(basis):
            path = out / f"state_{i}.txt"
            _write(path, formats.format_state(v))
            files.append(str(path))
    emit({"fixed_point_residual": fix_err, "gram_residual": gram_err, "files": files}, args.format)
    return OK if ok else CHECK_FAILED


def cmd_coset_build(args) -> int:
    try:
        gens, reps = formats.parse_group(_read(args.group))
        group = stabilizer.close_group(gens)
    except (formats.FormatError, stabilizer.StabilizerError) as exc:
        raise InputError(f"{args.group}: {exc}") from None
    if not group.is_self_dual:
        raise InputError(f"{args.group}: need {group.n} independent generators to fix a single state")
    if not reps:
        raise InputError(f"{args.group}: no 'coset:' lines")
    seed_state = stabilizer.character_projector(group, (1,) * group.r)
    p0 = CodeProjector.from_expansion(seed_state, tol=0)
    try:
        built = analysis.reconstruct_from_cosets(p0, reps)
    except CodeError as exc:
        emit({"built": False, "reason": str(exc)}, args.format)
        return CHECK_FAILED
    if args.out:
        _write(args.out, formats.format_expansion(built.expansion))
    payload = {"built": True, "K": built.K, "terms": len(built.expansion)}
    ok = True
    if args.reference:
        ref = _load_expansion(args.reference)
        tol = args.tol if args.tol is not None else (0.0 if ref.is_exact else 1e-10)
        ok = built.expansion.equals(ref, tol)
        payload["matches_reference"] = ok
    union = stabilizer.coset_union(group, reps)
    payload["coset_union_size"] = len(union)
    payload["coset_union_min_distance"] = stabilizer.coset_union_min_distance(union)
    emit(payload, args.format)
    return OK if ok else CHECK_FAILED


# parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance (exact inputs ignore it)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="nonadditive",
        description="Build, verify and rediscover the ((5,6,2)) nonadditive code.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("build", cmd_build, "write the code projector and report on it")
    sp.add_argument("--out", help="expansion file to write")

    sp = add("verify", cmd_verify, "report on a projector read from an expansion file")
    sp.add_argument("input")

    sp = add("enumerator", cmd_enumerator, "weight enumerators of an expansion file")
    sp.add_argument("input")

    sp = add("discover", cmd_discover, "randomized search for a ((5,6,2)) projector")
    sp.add_argument("--seed", type=int, default=discovery.DEFAULT_SEED)
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--max-iters", type=int, default=500)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="expansion file for the discovered projector")
    sp.add_argument("--trace", help="file for the per-iteration trace")

    sp = add("symmetry", cmd_symmetry, "check the symmetry generators and group orders")
    sp.add_argument("input")
    sp.add_argument("--level", choices=symmetry.LEVELS, default="full")

    sp = add("basis", cmd_basis, "write the six code basis states")
    sp.add_argument("--out", default="basis", help="directory for state files")

    sp = add("coset-build", cmd_coset_build, "build a code from a stabilizer state and coset representatives")
    sp.add_argument("group", help="group file: signed generators plus 'coset:' lines")
    sp.add_argument("--reference", help="expansion file to compare against")
    sp.add_argument("--out", help="expansion file for the built projector")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, PauliParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
