"""steiner-sieve command line.

    steiner-sieve xgcd-cert --candidate G2-parabolic
    steiner-sieve sieve --candidate all --out report.json
    steiner-sieve build-plane --e 3 --out plane.txt --emit-group sz8.txt
    steiner-sieve verify plane.txt --group sz8.txt

Exit codes: 0 ok, 1 survivors or failed verification, 2 usage error,
3 internal self-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .arith import set_default_seed, DEFAULT_SEED
from .catalog import CatalogError, catalog_builtin
from .designs import (
    DesignFormatError,
    NotAnAutomorphism,
    check_counts,
    format_design,
    is_block_transitive,
    is_flag_transitive,
    read_design,
    verify_3design,
)
from .permgrp import GroupFormatError, PermGroup, format_group, read_group
from .polycert import poly_print
from .sieve import (
    design_params,
    inequality_range,
    sieve_candidate,
    stab_certificate,
    subdegree_certificates,
)
from .suzuki import SuzukiSelfCheckError, build_inversive_plane, suzuki_generators

EXIT_OK, EXIT_SURVIVORS, EXIT_USAGE, EXIT_SELFCHECK = 0, 1, 2, 3

DESK_QCAP = 1000
LONG_QCAP = 10**5


@dataclass(frozen=True)
class RunConfig:
    command: str
    candidate: Optional[str] = None
    qcap: Optional[int] = None
    out: Optional[str] = None
    seed: int = DEFAULT_SEED
    workers: int = 1
    long: bool = False


class UsageError(Exception):
    pass


def _out(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _lookup(catalog, cid):
    if cid not in catalog:
        raise UsageError(f"unknown candidate {cid!r}; known: {', '.join(catalog.ids())}")
    return catalog[cid]


# ---------------------------------------------------------------------------


def cmd_xgcd_cert(cfg: RunConfig) -> int:
    entry = _lookup(catalog_builtin(), cfg.candidate)
    cert = stab_certificate(entry)
    vv = "(v-1)(v-2)"
    lines = [
        f"candidate   {entry.id}",
        f"|T_alpha|   {poly_print(entry.stab_order)}",
        f"v           {poly_print(entry.v_poly)}",
        f"deg |T_alpha| = {entry.stab_order.degree}, deg {vv} = {2 * entry.v_poly.degree}",
        f"r1          {poly_print(cert.r1)}",
        f"p1          {poly_print(cert.p1)}",
        f"q1          {poly_print(cert.q1)}",
        f"r1 coeffs   {json.dumps(cert.as_dict()['r1'])}",
        f"p1 coeffs   {json.dumps(cert.as_dict()['p1'])}",
        f"q1 coeffs   {json.dumps(cert.as_dict()['q1'])}",
        f"identity    p1*|T_alpha| + q1*{vv} = r1  (checked: {cert.check()})",
        f"claim       gcd(|T_alpha|(q), {vv}(q)) divides r1(q)",
    ]
    for d, c in zip(entry.subdegrees, subdegree_certificates(entry)):
        lines.append(f"subdegree   d = {poly_print(d)}: gcd(d(d-1), {vv}) divides {poly_print(c.r1)}")
    _out(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _qcap_for(entry, cfg: RunConfig) -> Optional[int]:
    """User cap; otherwise the entry's own bound when it has one, else the
    desk-scale (or, with --long, full) cap."""
    if cfg.qcap is not None:
        return cfg.qcap
    if entry.is_fixed or _has_finite_bound(entry):
        return None
    return LONG_QCAP if cfg.long else DESK_QCAP


def _has_finite_bound(entry) -> bool:
    for cert in [stab_certificate(entry), *subdegree_certificates(entry)]:
        try:
            inequality_range(entry, cert)
            return True
        except ValueError:
            pass
    return False


def cmd_sieve(cfg: RunConfig) -> int:
    catalog = catalog_builtin()
    if cfg.candidate.lower() == "all":
        entries = list(catalog)
    else:
        entries = [_lookup(catalog, cfg.candidate)]
    reports = []
    unexpected = 0
    errors = 0
    for entry in entries:
        rep = sieve_candidate(entry, qcap=_qcap_for(entry, cfg), workers=cfg.workers)
        d = rep.as_dict()
        surv = rep.survivors()
        bad = [(q, k) for q, k in surv if not entry.survivor_expected(q, k)]
        d["unexpected_survivors"] = [{"q": q, "k": k} for q, k in bad]
        reports.append(d)
        unexpected += len(bad)
        errors += len(rep.errors())
        shown = ", ".join(f"q={q}: {ks}" for q, ks in rep.survivors_by_q().items()) or "none"
        print(f"{entry.id}: q in [{rep.q_range[0]}, {rep.q_range[1]}], bound {rep.qmax_bound}, "
              f"survivors {shown}" + (f", {len(bad)} unexpected" if bad else ""),
              file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
    doc = {"version": __version__, "seed": cfg.seed, "reports": reports}
    _out(cfg.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_SURVIVORS if unexpected or errors else EXIT_OK


def _design_summary(inst, grp: Optional[PermGroup]) -> tuple[list[str], bool]:
    res = verify_3design(inst)
    counts = check_counts(inst)
    lines = [f"v = {inst.v}, k = {inst.k}, b = {inst.b}"]
    ok = res.passed
    if res.passed:
        lines.append("steiner 3-design: pass")
    else:
        kind = "uncovered" if res.witness_count == 0 else f"covered {res.witness_count} times"
        lines.append(f"steiner 3-design: FAIL, triple {res.witness} {kind}")
    lines.append(f"lambda1 = {counts.lambda1}, lambda2 = {counts.lambda2}")
    if res.passed and inst.k > 2:
        dp = design_params(inst.v, inst.k)
        if counts.lambda1 != dp.lambda1 or counts.lambda2 != dp.lambda2 or inst.b != dp.b:
            lines.append("counts: FAIL, they disagree with the design parameters")
            ok = False
    if grp is not None:
        lines.append(f"group order = {grp.order}")
        bt = is_block_transitive(inst, grp)
        ft = is_flag_transitive(inst, grp)
        lines.append(f"block-transitive: {str(bt).lower()}")
        lines.append(f"flag-transitive: {str(ft).lower()}")
    return lines, ok


def cmd_build_plane(cfg: RunConfig, e: int, emit_group: Optional[str]) -> int:
    if e < 3 or e % 2 == 0:
        raise UsageError("--e must be odd and at least 3")
    if e > 3 and not cfg.long:
        raise UsageError(f"e = {e} is long-running; pass --long")
    try:
        gens = suzuki_generators(e)
        inst = build_inversive_plane(e, gens)
    except SuzukiSelfCheckError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    grp = PermGroup(len(gens[0]), gens)
    lines, ok = _design_summary(inst, grp)
    if not ok:
        print("\n".join(lines), file=sys.stderr)
        return EXIT_SELFCHECK
    _out(cfg.out, format_design(inst))
    if emit_group:
        with open(emit_group, "w", encoding="utf-8") as fh:
            fh.write(format_group(grp))
    print("\n".join(lines), file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, design_path: str, group_path: Optional[str]) -> int:
    try:
        inst = read_design(design_path)
        grp = read_group(group_path) if group_path else None
    except (DesignFormatError, GroupFormatError) as exc:
        raise UsageError(f"parse error: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if grp is not None and grp.degree != inst.v:
        raise UsageError(f"group degree {grp.degree} does not match v = {inst.v}")
    try:
        lines, ok = _design_summary(inst, grp)
    except NotAnAutomorphism as exc:
        lines, ok = [f"group: FAIL, {exc}"], False
    _out(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_SURVIVORS


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _qcap(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized primality rounds and rho")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--long", action="store_true",
                        help="allow long runs: e >= 5 planes, q up to 10^5 sieves")

    ap = argparse.ArgumentParser(prog="steiner-sieve", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xgcd-cert", parents=[common], help="gcd certificate for a candidate")
    p.add_argument("--candidate", required=True)

    p = sub.add_parser("sieve", parents=[common], help="run the arithmetic sieve")
    p.add_argument("--candidate", required=True, help='catalog id or "all"')
    p.add_argument("--qcap", type=_qcap)

    p = sub.add_parser("build-plane", parents=[common], help="build the Suzuki-Tits inversive plane")
    p.add_argument("--e", type=int, required=True, help="odd field exponent, q = 2^e")
    p.add_argument("--emit-group", metavar="PATH", help="also write the group generators")

    p = sub.add_parser("verify", parents=[common], help="verify a design file")
    p.add_argument("design")
    p.add_argument("--group", help="group file for transitivity checks")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        candidate=getattr(args, "candidate", None),
        qcap=getattr(args, "qcap", None),
        out=args.out,
        seed=args.seed,
        workers=args.workers,
        long=args.long,
    )
    set_default_seed(cfg.seed)
    try:
        if cfg.command == "xgcd-cert":
            return cmd_xgcd_cert(cfg)
        if cfg.command == "sieve":
            return cmd_sieve(cfg)
        if cfg.command == "build-plane":
            return cmd_build_plane(cfg, args.e, args.emit_group)
        return cmd_verify(cfg, args.design, args.group)
    except UsageError as exc:
        print(f"steiner-sieve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatalogError as exc:
        print(f"steiner-sieve: catalog error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"steiner-sieve: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
