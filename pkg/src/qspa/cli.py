"""Command-line front end: simulate, enumerate, verify, decode-one.

Outputs are deterministic for a given configuration: CSV files carry a
content hash of the resolved configuration and no timestamps, so reruns
are byte-identical.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import oracle, pcwd, sim, spa, stabilizer
from .channel import ChannelModel, llr_vector, sample_error
from .enumeration import EnumerationBudgetError, count_patterns
from .stabilizer import (
    Classification,
    StabilizerCode,
    build_bicycle,
    build_toric,
    classify,
    format_pauli,
    load_code,
    min_weight_vector,
    pauli_from_ops,
    pauli_weight,
    syndrome,
)


def parse_code_spec(spec: str) -> StabilizerCode:
    kind, _, rest = spec.partition(":")
    if kind == "toric":
        return build_toric(int(rest))
    if kind == "bicycle":
        parts = [int(x) for x in rest.split(",")]
        if len(parts) != 4:
            raise ValueError("bicycle spec needs n,k,row_weight,seed")
        return build_bicycle(*parts)
    if kind == "file":
        return load_code(rest)
    raise ValueError(f"unknown code spec {spec!r} (use toric:L | bicycle:n,k,w,seed | file:path)")


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_range(text: str) -> tuple[float, float]:
    vals = _parse_floats(text)
    if len(vals) != 2:
        raise ValueError(f"range needs two comma-separated values, got {text!r}")
    return vals[0], vals[1]


def _decoder_params(args) -> dict:
    return dict(
        max_iters=args.max_iters,
        damping=args.damping,
        imr_trials=args.imr_trials,
        imr_range=_parse_range(args.imr_range),
        rr_range=_parse_range(args.rr_range),
    )


def _config_dict(args, extra: dict) -> dict:
    cfg = {
        "code": args.code,
        "decoder": getattr(args, "decoder", None),
        "max_iters": args.max_iters,
        "imr_trials": args.imr_trials,
        "imr_range": args.imr_range,
        "rr_range": args.rr_range,
        "damping": args.damping,
    }
    cfg.update(extra)
    return cfg


def _config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return "" if x is None else str(x)


def cmd_simulate(args) -> int:
    code = parse_code_spec(args.code)
    p_values = _parse_floats(args.p)
    cfg = _config_dict(args, {"p": p_values, "trials": args.trials, "seed": args.seed})
    chash = _config_hash(cfg)
    params = _decoder_params(args)
    rows = []
    for p in p_values:
        stats = sim.run_trials(code, args.decoder, p, args.trials, args.seed, **params)
        rows.append(
            [
                args.code,
                args.decoder,
                _fmt(p),
                stats.trials,
                stats.failures,
                _fmt(stats.wer),
                _fmt(stats.wilson_interval[0]),
                _fmt(stats.wilson_interval[1]),
                _fmt(stats.min_failure_weight),
                _fmt(stats.mean_failure_weight),
                args.seed,
                chash,
            ]
        )
    header = [
        "code",
        "decoder",
        "p",
        "trials",
        "failures",
        "wer",
        "wilson_lo",
        "wilson_hi",
        "min_fail_weight",
        "mean_fail_weight",
        "seed",
        "config_hash",
    ]
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        fh.write(f"# config {json.dumps(cfg, sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    if args.json:
        mirror = {
            "config": cfg,
            "config_hash": chash,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        Path(args.json).write_text(json.dumps(mirror, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_enumerate(args) -> int:
    code = parse_code_spec(args.code)
    dec = sim.make_decoder(code, args.decoder, args.p, **_decoder_params(args))
    if args.alphabet == "pauli":
        total = count_patterns(code.n, args.weight)
        failures, count = oracle.enumerate_failures(
            code, dec.handle(), args.weight, pattern_budget=args.budget
        )
    else:
        import math

        total = math.comb(2 * code.n, args.weight)
        failures, count = oracle.enumerate_binary_failures(
            code, dec.handle(), args.weight, pattern_budget=args.budget
        )
    print(
        f"code={args.code} decoder={args.decoder} weight={args.weight} "
        f"alphabet={args.alphabet} patterns={total} failures={count}"
    )
    if args.out:
        lines = [
            f"# code={args.code} decoder={args.decoder} weight={args.weight} "
            f"alphabet={args.alphabet}",
            f"# patterns={total} failures={count}",
        ]
        for e in failures:
            lines.append(format_pauli(e))
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote failing patterns to {args.out}")
    return 0


def cmd_verify(args) -> int:
    code = parse_code_spec(args.code)
    results: list[tuple[str, bool, str]] = []

    d_n, _ = min_weight_vector(code, "d_n", pattern_budget=args.budget)
    d, _ = min_weight_vector(code, "d", pattern_budget=args.budget)
    t_n = (d_n - 1) // 2
    t = (d - 1) // 2
    print(f"code={args.code} n={code.n} k={code.k} d={d} d_N={d_n} t={t} t_N={t_n}")

    table = oracle.SyndromeTable(code, pattern_budget=args.budget)

    v1, v2 = oracle.failing_witness_nd(code, pattern_budget=args.budget)
    w1, w2 = pauli_weight(v1), pauli_weight(v2)
    results.append(
        (
            "witness splits a weight-d_N normalizer element",
            w2 == t_n + 1 and w1 <= t_n + 1,
            f"v1={format_pauli(v1)} (w={w1}) v2={format_pauli(v2)} (w={w2})",
        )
    )
    v1, v2 = oracle.failing_witness_d(code, pattern_budget=args.budget)
    w1, w2 = pauli_weight(v1), pauli_weight(v2)
    results.append(
        (
            "witness splits a weight-d logical element",
            w2 == t + 1 and w1 <= t + 1,
            f"v1={format_pauli(v1)} (w={w1}) v2={format_pauli(v2)} (w={w2})",
        )
    )

    nd_first = oracle.first_ml_failure_weight(code, "nd", t_n + 1, table)
    results.append(
        (
            f"min-weight decoder first fails at weight {t_n + 1}",
            nd_first == t_n + 1,
            f"observed {nd_first}",
        )
    )
    dstar_first = oracle.first_ml_failure_weight(code, "d_star", t + 1, table)
    results.append(
        (
            f"degenerate min-weight decoder first fails at weight {t + 1}",
            dstar_first == t + 1,
            f"observed {dstar_first}",
        )
    )

    members = 1 << (code.n + code.k)
    if members <= args.ml_d_budget:
        agree = oracle.ml_d_matches_ml_d_star(code, args.p_small, table)
        results.append(
            (
                f"coset-probability and min-weight decoders agree at p={args.p_small}",
                agree,
                "all syndromes",
            )
        )
    else:
        print("note: coset-probability decoder skipped (enumeration too large)")

    all_ok = True
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}: {name} [{detail}]")
        all_ok &= ok
    return 0 if all_ok else 1


def cmd_decode_one(args) -> int:
    code = parse_code_spec(args.code)
    if args.error:
        ops = []
        for tok in args.error.split():
            idx, letter = tok.split(":")
            ops.append((int(idx), letter))
        e = pauli_from_ops(code.n, ops)
    else:
        rng = np.random.default_rng([args.seed, 0])
        e = sample_error(ChannelModel(args.p), code.n, rng)
    s = syndrome(code, e)
    dec = sim.make_decoder(code, args.decoder, args.p, **_decoder_params(args))
    rng = np.random.default_rng([args.seed, 1])
    out, iters, used = dec.decode(s, rng)
    cls = classify(code, out, e)
    print(f"error      : {format_pauli(e)} (weight {pauli_weight(e)})")
    print(f"syndrome   : weight {int(s.sum())} of {s.shape[0]}")
    print(f"output     : {format_pauli(out)}")
    print(f"iterations : {iters}  retries: {used}")
    print(f"classify   : {cls.name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspa",
        description="Decoding laboratory for quantum stabilizer codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, decoder=True):
        p.add_argument("--code", required=True, help="toric:L | bicycle:n,k,w,seed | file:path")
        if decoder:
            p.add_argument("--decoder", required=True, choices=sim.DECODER_IDS)
        p.add_argument("--max-iters", type=int, default=100)
        p.add_argument("--imr-trials", type=int, default=10)
        p.add_argument("--imr-range", default="0.5,1.5")
        p.add_argument("--rr-range", default="0.8,1.0")
        p.add_argument("--damping", type=float, default=0.0)

    p_sim = sub.add_parser("simulate", help="Monte Carlo word-error-rate sweep")
    common(p_sim)
    p_sim.add_argument("--p", required=True, help="comma-separated channel probabilities")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default="results.csv")
    p_sim.add_argument("--json", default=None, help="optional JSON mirror path")
    p_sim.set_defaults(func=cmd_simulate)

    p_enum = sub.add_parser("enumerate", help="exhaustive fixed-weight failure scan")
    common(p_enum)
    p_enum.add_argument("--weight", type=int, required=True)
    p_enum.add_argument("--alphabet", choices=("pauli", "binary"), default="pauli",
                        help="pauli: X/Y/Z per support qubit; binary: raw bit patterns")
    p_enum.add_argument("--p", type=float, default=0.01, help="channel p for decoder priors")
    p_enum.add_argument("--budget", type=int, default=2_000_000)
    p_enum.add_argument("--out", default=None)
    p_enum.set_defaults(func=cmd_enumerate)

    p_ver = sub.add_parser("verify", help="distances, witnesses, and first-failure weights")
    common(p_ver, decoder=False)
    p_ver.add_argument("--p-small", type=float, default=1e-3)
    p_ver.add_argument("--budget", type=int, default=700_000_000)
    p_ver.add_argument("--ml-d-budget", type=int, default=1 << 14)
    p_ver.set_defaults(func=cmd_verify)

    p_one = sub.add_parser("decode-one", help="decode a single error")
    common(p_one)
    p_one.add_argument("--p", type=float, default=0.01)
    p_one.add_argument("--seed", type=int, default=0)
    p_one.add_argument("--error", default=None, help="explicit error, e.g. '3:X 7:Z'")
    p_one.set_defaults(func=cmd_decode_one)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, stabilizer.CodeFormatError, stabilizer.CodeInvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
