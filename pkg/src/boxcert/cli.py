"""boxcert command line: validation, CHSH, twirling, anti-robustness,
hyperplane checks, broadcast certificates, and certificate re-verification.

Exit codes: 0 = check passed / verdict as expected, 1 = property violated
or inconclusive, 2 = usage or input error.  All JSON output is
deterministic (sorted keys, no timestamps) so identical inputs and seeds
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

from .box import BoxError, is_fully_ns
from .boxio import BoxFormatError, box_to_dict, load_box
from .broadcast import BroadcastInstance, RangeError, broadcast_scan, classify_row
from .certificates import (
    antirobustness_certificate,
    halfspace_certificate,
    hyperplane_certificate,
    load_certificate,
    save_certificate,
    scan_certificate,
    verify_certificate,
)
from .chsh import beta, beta_table
from .polytope import (
    PreconditionNotMet,
    UnsupportedShape,
    anti_robustness,
    anti_robustness_closed_form,
    halfspace_body_equality_check,
    hyperplane_locality_check,
)
from .rational import RationalFormatError, format_rational, format_rational_short, parse_rational
from .twirl import line_decomposition, twirl

F = Fraction


def _parse_bits(text: str, width: int) -> tuple[int, ...]:
    if len(text) != width or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"expected {width} bits, got {text!r}")
    return tuple(int(c) for c in text)


def _parse_grid(text: str) -> list[Fraction]:
    try:
        start_s, end_s, step_s = text.split(":")
        start, end, step = (
            parse_rational(start_s),
            parse_rational(end_s),
            parse_rational(step_s),
        )
    except (ValueError, RationalFormatError) as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc
    if step <= 0 or end < start:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    values = []
    current = start
    while current <= end:
        values.append(current)
        current += step
    return values


def _write_json(path: str | None, payload) -> None:
    if path:
        save_certificate(payload, path)


def _load_box_or_exit(path: str):
    try:
        return load_box(path)
    except FileNotFoundError:
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(2)
    except (BoxFormatError, BoxError) as exc:
        print(f"error: malformed box file {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# Verbs.
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    box = _load_box_or_exit(args.box)
    report = is_fully_ns(box)
    print(
        f"box: {box.party_count} parties, inputs {list(box.input_arity)}, "
        f"outputs {list(box.output_arity)}"
    )
    print(f"fully non-signalling: {'yes' if report.fully_ns else 'no'}")
    for violation in report.violations[:8]:
        print(
            f"  violation in cut {violation.cut} ({violation.direction}): "
            f"inputs {violation.inputs}, discrepancy {format_rational_short(violation.discrepancy)}"
        )
    payload = {
        "kind": "validation",
        "box": box_to_dict(box),
        "fully_ns": report.fully_ns,
        "violation_count": len(report.violations),
    }
    _write_json(args.json, payload)
    return 0 if report.fully_ns else 1


def cmd_beta(args) -> int:
    box = _load_box_or_exit(args.box)
    try:
        if args.rst is not None:
            value = beta(box, *args.rst)
            print(format_rational_short(value))
            payload = {
                "kind": "beta",
                "box": box_to_dict(box),
                "rst": "".join(map(str, args.rst)),
                "value": format_rational(value),
            }
        else:
            values, local = beta_table(box)
            for v in values:
                print(f"beta_{v.r}{v.s}{v.t} = {format_rational_short(v.value)}")
            print(f"all within [-2, 2]: {'yes' if local else 'no'}")
            payload = {
                "kind": "beta",
                "box": box_to_dict(box),
                "values": {
                    f"{v.r}{v.s}{v.t}": format_rational(v.value) for v in values
                },
                "local_flag": local,
            }
    except BoxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_json(args.json, payload)
    return 0


def cmd_twirl(args) -> int:
    box = _load_box_or_exit(args.box)
    r, s = args.rs
    try:
        image = twirl(box, r, s)
    except BoxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    p = line_decomposition(image, r, s)
    print(f"line weight p = {format_rational_short(p)}")
    if args.json:
        Path(args.json).write_text(
            json.dumps(box_to_dict(image), indent=2, sort_keys=True) + "\n"
        )
    return 0


def cmd_antirobustness(args) -> int:
    box = _load_box_or_exit(args.box)
    try:
        if args.method == "formula":
            value = anti_robustness_closed_form(box)
            print(format_rational_short(value))
            payload = {
                "kind": "antirobustness-formula",
                "box": box_to_dict(box),
                "value": format_rational(value),
            }
        else:
            result = anti_robustness(box)
            print(format_rational_short(result.value))
            payload = antirobustness_certificate(box, result)
    except (UnsupportedShape, PreconditionNotMet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_json(args.json, payload)
    return 0


def cmd_hyperplane_check(args) -> int:
    apexes = [args.rst] if args.rst else list(itertools.product((0, 1), repeat=3))
    certificates = []
    all_pass = True
    for r, s, t in apexes:
        report = hyperplane_locality_check(r, s, t)
        status = "pass" if report.all_pass else "FAIL"
        print(f"apex {r}{s}{t}: {len(report.checks)} ray points, {status}")
        all_pass &= report.all_pass
        certificates.append(hyperplane_certificate(report))
        if args.samples:
            half = halfspace_body_equality_check(
                r, s, t, samples=args.samples, seed=args.seed
            )
            status = "pass" if half.all_pass else "FAIL"
            print(
                f"apex {r}{s}{t}: {2 * half.samples} sampled hull checks, {status}"
            )
            all_pass &= half.all_pass
            certificates.append(halfspace_certificate(half))
    _write_json(
        args.json, certificates if len(certificates) > 1 else certificates[0]
    )
    return 0 if all_pass else 1


def _broadcast_rows(alphas, include_full):
    report = broadcast_scan(alphas, include_full=include_full)
    ok = True
    for row in report.rows:
        verdict = "feasible" if row.projection.feasible else "infeasible"
        line = (
            f"alpha = {format_rational_short(row.alpha)}: projection {verdict}, "
            f"anti-robustness = {format_rational_short(row.anti_robustness)}"
        )
        full_feasible = None if row.full is None else row.full.feasible
        if row.full is not None:
            line += f", full oracle {'feasible' if row.full.feasible else 'infeasible'}"
        status = classify_row(row.alpha, row.projection.feasible, full_feasible)
        if not status.certified:
            line += f"  [{status.note}]"
        print(line)
        ok &= status.certified
    return report, ok


def cmd_broadcast_check(args) -> int:
    try:
        instance = BroadcastInstance(args.alpha)
    except RangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report, ok = _broadcast_rows([instance.alpha], args.full)
    _write_json(args.json, scan_certificate(report))
    return 0 if ok else 1


def cmd_scan(args) -> int:
    alphas = args.alpha_grid
    bad = [a for a in alphas if not F(3, 4) <= a <= 1]
    if bad:
        print(f"error: grid values outside [3/4, 1]: {bad}", file=sys.stderr)
        return 2
    if not alphas:
        print("empty grid")
        _write_json(args.json, {"kind": "broadcast", "result": {"rows": []}})
        return 0
    report, ok = _broadcast_rows(alphas, args.full)
    _write_json(args.json, scan_certificate(report))
    return 0 if ok else 1


def cmd_verify_cert(args) -> int:
    try:
        data = load_certificate(args.certificate)
    except FileNotFoundError:
        print(f"error: no such file: {args.certificate}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    items = data if isinstance(data, list) else [data]
    all_ok = True
    for i, item in enumerate(items):
        ok, errors = verify_certificate(item)
        label = item.get("kind", "?") if isinstance(item, dict) else "?"
        print(f"certificate {i} ({label}): {'verified' if ok else 'FAILED'}")
        for message in errors:
            print(f"  {message}")
        all_ok &= ok
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxcert",
        description="Exact certification toolkit for non-signalling boxes",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="validate a box file and check full NS")
    p.add_argument("box")
    p.add_argument("--json", help="write a JSON report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("beta", help="CHSH quantities of a 2x2 box")
    p.add_argument("box")
    p.add_argument("--rst", type=lambda v: _parse_bits(v, 3), help="3 bits, e.g. 000")
    p.add_argument("--json")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("twirl", help="apply the twirl channel tau_rs")
    p.add_argument("box")
    p.add_argument(
        "--rs", type=lambda v: _parse_bits(v, 2), required=True, help="2 bits, e.g. 00"
    )
    p.add_argument("--json", help="write the twirled box as a box file")
    p.set_defaults(func=cmd_twirl)

    p = sub.add_parser("antirobustness", help="anti-robustness of a fully-NS box")
    p.add_argument("box")
    p.add_argument("--method", choices=("lp", "formula"), default="lp")
    p.add_argument("--json", help="write the certificate")
    p.set_defaults(func=cmd_antirobustness)

    p = sub.add_parser(
        "hyperplane-check", help="ray-point locality and sampled hull equality"
    )
    p.add_argument("--rst", type=lambda v: _parse_bits(v, 3), help="apex bits; default all 8")
    p.add_argument("--samples", type=int, default=0, help="sampled hull checks per side")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(func=cmd_hyperplane_check)

    p = sub.add_parser("broadcast-check", help="broadcast feasibility at one alpha")
    p.add_argument("--alpha", type=parse_rational, required=True)
    p.add_argument("--full", action="store_true", help="also run the 4-party oracle")
    p.add_argument("--json")
    p.set_defaults(func=cmd_broadcast_check)

    p = sub.add_parser("scan", help="broadcast feasibility over an alpha grid")
    p.add_argument(
        "--alpha-grid",
        type=_parse_grid,
        required=True,
        metavar="START:END:STEP",
        help="rational grid, e.g. 3/4:1:1/16",
    )
    p.add_argument("--full", action="store_true")
    p.add_argument("--json")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-cert", help="re-verify an emitted certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify_cert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
