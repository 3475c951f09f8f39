"""Command line front end.

Subcommands: keygen, encrypt, decrypt, roundtrip, analyze, attack, sweep.
All randomness flows from --seed, so reruns with the same arguments write
byte-identical files. Analysis commands exit nonzero when any computed
quantity violates its bound.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, attacks, bits, schemes
from .analysis import MixtureSpec, SecurityReport
from .schemes import SchemeId


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _parse_range(text: str) -> list[int]:
    """'4' -> [4]; '1..8' -> [1, 2, ..., 8]."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _dump_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _provenance(args, **config) -> dict:
    return {"seed": args.seed, "version": __version__, "config": config}


# ---------------------------------------------------------------------------


def cmd_keygen(args) -> int:
    rng = _rng(args.seed)
    sk, pks = schemes.keygen(SchemeId(args.scheme), args.n, rng, m=args.m,
                             count=args.count)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    priv = schemes.private_key_to_json(sk, seed=args.seed)
    priv["version"] = __version__
    priv_text = json.dumps(priv, indent=2, sort_keys=True) + "\n"
    (outdir / "private.json").write_text(priv_text)
    for idx, pk in enumerate(pks):
        pub = schemes.public_key_to_json(pk, seed=args.seed)
        pub["version"] = __version__
        (outdir / f"pub_{idx:04d}.json").write_text(
            json.dumps(pub, indent=2, sort_keys=True) + "\n")
    digest = hashlib.sha256(priv_text.encode()).hexdigest()[:12]
    print(f"scheme={sk.scheme.value} n={sk.n} m={sk.m} count={len(pks)} "
          f"seed={args.seed} private_fingerprint={digest}")
    return 0


def cmd_encrypt(args) -> int:
    pk = schemes.public_key_from_json(json.loads(Path(args.pub).read_text()))
    message, width = bits.from_str(args.message)
    expected = schemes.message_width(pk.scheme, pk.n)
    if width != expected:
        raise SystemExit(f"message must be {expected} bit(s) for scheme {pk.scheme.value}")
    rng = _rng(args.seed)
    ct = schemes.encrypt(pk, message, rng, allow_reuse=args.allow_reuse)
    obj = schemes.ciphertext_to_json(ct, seed=args.seed)
    obj["version"] = __version__
    _dump_json(obj, args.out)
    return 0


def cmd_decrypt(args) -> int:
    sk = schemes.private_key_from_json(json.loads(Path(args.priv).read_text()))
    ct = schemes.ciphertext_from_json(json.loads(Path(args.ct).read_text()))
    message = schemes.decrypt(sk, ct)
    print(bits.to_str(message, schemes.message_width(sk.scheme, sk.n)))
    return 0


def cmd_roundtrip(args) -> int:
    rng = _rng(args.seed)
    scheme = SchemeId(args.scheme)
    width = schemes.message_width(scheme, args.n)
    correct = 0
    for _ in range(args.trials):
        sk, (pk,) = schemes.keygen(scheme, args.n, rng, m=args.m, count=1)
        message = bits.rand_bits(rng, width)
        ct = schemes.encrypt(pk, message, rng)
        correct += schemes.decrypt(sk, ct) == message
    print(f"scheme={scheme.value} n={args.n} trials={args.trials} correct={correct}")
    return 0 if correct == args.trials else 1


# ---------------------------------------------------------------------------

ANALYZE_TARGETS = (
    "sigma-bound",
    "channel-identity",
    "scheme-a-cipher",
    "scheme-b-cipher",
    "scheme-m1-cipher",
    "scheme-m2-cipher",
    "pubkey-leakage",
    "multicopy",
    "pan10-bounds",
)


def _analyze_target(target: str, ns: list[int], ts: list[int], args,
                    rng: np.random.Generator) -> list[SecurityReport]:
    reports: list[SecurityReport] = []
    for n in ns:
        if target == "sigma-bound":
            reports.append(analysis.sigma_bound_report(n))
        elif target == "channel-identity":
            reports.append(analysis.channel_identity_report(n))
        elif target == "scheme-a-cipher":
            reports.append(analysis.cipher_distance_report(SchemeId.A, n))
        elif target == "scheme-b-cipher":
            reports.append(analysis.cipher_distance_report(SchemeId.B, n))
        elif target == "scheme-m1-cipher":
            reports.append(analysis.cipher_distance_report(SchemeId.M1, n))
        elif target == "scheme-m2-cipher":
            reports.append(analysis.cipher_distance_report(SchemeId.M2, n))
        elif target == "pubkey-leakage":
            reports.append(analysis.pubkey_mixture_A(n))
            reports.append(analysis.pubkey_mixture_B(n))
        elif target == "multicopy":
            for t in ts:
                spec = MixtureSpec(SchemeId.B, n, t, key_model=args.key_model,
                                   reuse=args.reuse, anf_samples=args.samples,
                                   seed=args.seed)
                reports.append(analysis.multicopy_distance(spec, rng))
        elif target == "pan10-bounds":
            for t in ts:
                reports.extend(analysis.pan10_mixture_distance(n, t))
        else:
            raise SystemExit(f"unknown analyze target {target!r}")
    return reports


def _emit_reports(reports: list[SecurityReport], args, config: dict) -> int:
    if args.format == "csv":
        prov = {"seed": args.seed, "version": __version__,
                "config": json.dumps(config, sort_keys=True)}
        _write_text(analysis.reports_to_csv(reports, prov), args.out)
    else:
        rows = [{
            "quantity": r.quantity, "scheme": r.scheme, "n": r.n, "t": r.t,
            "key_model": r.key_model, "reuse": r.reuse, "computed": r.computed,
            "bound": r.bound, "margin": r.margin, "seed": r.seed,
        } for r in reports]
        _dump_json({**_provenance(args, **config), "reports": rows}, args.out)
    bad = [r for r in reports if not analysis.report_ok(r)]
    for r in bad:
        print(f"BOUND VIOLATED: {r.quantity} scheme={r.scheme} n={r.n} t={r.t} "
              f"computed={r.computed} bound={r.bound}", file=sys.stderr)
    return 1 if bad else 0


def cmd_analyze(args) -> int:
    rng = _rng(args.seed)
    ns = _parse_range(args.n)
    ts = _parse_range(args.t)
    reports = _analyze_target(args.target, ns, ts, args, rng)
    config = {"target": args.target, "n": args.n, "t": args.t,
              "key_model": args.key_model, "reuse": args.reuse}
    return _emit_reports(reports, args, config)


def cmd_sweep(args) -> int:
    """The full default battery over the standard parameter grid."""
    rng = _rng(args.seed)
    reports: list[SecurityReport] = []
    for n in range(1, 9):
        reports.append(analysis.sigma_bound_report(n))
    for n in range(1, 6):
        reports.append(analysis.channel_identity_report(n))
    for n in range(1, 7):
        reports.append(analysis.cipher_distance_report(SchemeId.A, n))
    for scheme in (SchemeId.B, SchemeId.M1, SchemeId.M2):
        for n in range(2, 6):
            reports.append(analysis.cipher_distance_report(scheme, n))
    for n in range(1, 6):
        reports.append(analysis.pubkey_mixture_A(n))
        reports.append(analysis.pubkey_mixture_B(n))
    for n, t in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        for reuse in ("fresh_s", "shared_s"):
            spec = MixtureSpec(SchemeId.B, n, t, reuse=reuse, seed=args.seed)
            reports.append(analysis.multicopy_distance(spec, rng))
    for n in range(3, 7):
        for t in (1, 2):
            if n * t <= 10:
                reports.extend(analysis.pan10_mixture_distance(n, t))
    return _emit_reports(reports, args, {"target": "sweep"})


# ---------------------------------------------------------------------------

ATTACK_TARGETS = ("pan10-key", "owt-baseline", "distinguish")


def cmd_attack(args) -> int:
    rng = _rng(args.seed)
    if args.target == "pan10-key":
        max_copies = args.max_copies or 4 * args.n
        outcomes = []
        for _ in range(args.runs):
            stream = attacks.pan10_shared_key_stream(args.n, rng, m=args.m)
            outcomes.append(attacks.pan10_key_recovery(stream, max_copies, rng,
                                                       seed=args.seed))
        rate = sum(o.success for o in outcomes) / len(outcomes)
        mean_copies = sum(o.copies_used for o in outcomes) / len(outcomes)
        if args.format == "csv":
            text = attacks.ATTACK_CSV_HEADER + "\n" + \
                "\n".join(o.to_csv_row() for o in outcomes) + "\n"
            _write_text(text, args.out)
        else:
            _dump_json({**_provenance(args, target=args.target, n=args.n,
                                      runs=args.runs, max_copies=max_copies),
                        "success_rate": rate, "mean_copies": mean_copies,
                        "runs": [o.to_json() for o in outcomes]}, args.out)
        print(f"pan10-key n={args.n} runs={args.runs} success_rate={rate:.4f} "
              f"mean_copies={mean_copies:.3f}", file=sys.stderr)
        return 0 if rate >= 0.99 else 1

    if args.target == "owt-baseline":
        try:
            rate = attacks.owt_inversion_baseline(args.n, args.samples, rng)
        except AssertionError as exc:
            print(f"owt-baseline FAILED: {exc}", file=sys.stderr)
            return 1
        expected = 0.5 ** args.n
        _dump_json({**_provenance(args, target=args.target, n=args.n,
                                  trials=args.samples),
                    "rate": rate, "expected": expected}, args.out)
        return 0

    if args.target == "distinguish":
        outcome = attacks.ciphertext_distinguisher(SchemeId(args.scheme), args.n,
                                                   args.samples, rng, seed=args.seed)
        if args.format == "csv":
            text = attacks.ATTACK_CSV_HEADER + "\n" + outcome.to_csv_row() + "\n"
            _write_text(text, args.out)
        else:
            _dump_json({**_provenance(args, target=args.target, n=args.n,
                                      scheme=args.scheme, samples=args.samples),
                        **outcome.to_json()}, args.out)
        return 0 if outcome.success else 1

    raise SystemExit(f"unknown attack target {args.target!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpke", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default=None):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=out_default)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("keygen", help="draw a private key and issue public keys")
    p.add_argument("--scheme", required=True, choices=[s.value for s in SchemeId])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt one message under a public key file")
    p.add_argument("--pub", required=True)
    p.add_argument("--message", required=True, help="bitstring, e.g. 1 or 01101")
    p.add_argument("--allow-reuse", action="store_true")
    common(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    p.add_argument("--priv", required=True)
    p.add_argument("--ct", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("roundtrip", help="keygen/encrypt/decrypt loops")
    p.add_argument("--scheme", required=True, choices=[s.value for s in SchemeId])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("analyze", help="compute security quantities and check bounds")
    p.add_argument("--target", required=True, choices=ANALYZE_TARGETS)
    p.add_argument("--n", required=True, help="value or range, e.g. 3 or 1..8")
    p.add_argument("--t", default="1", help="copy count or range (multicopy, pan10)")
    p.add_argument("--key-model", dest="key_model",
                   choices=("uniform_k", "sampled_anf"), default="uniform_k")
    p.add_argument("--reuse", choices=("fresh_s", "shared_s"), default="fresh_s")
    p.add_argument("--samples", type=int, default=0, help="ANF sample count")
    common(p, out_default=None)
    p.set_defaults(func=cmd_analyze, format="csv")

    p = sub.add_parser("attack", help="run an attack or baseline")
    p.add_argument("--target", required=True, choices=ATTACK_TARGETS)
    p.add_argument("--scheme", default="a", choices=("a", "b", "m2"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--max-copies", dest="max_copies", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("sweep", help="full default analysis battery")
    common(p, out_default=None)
    p.set_defaults(func=cmd_sweep, format="csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
