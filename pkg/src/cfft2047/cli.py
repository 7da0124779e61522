"""Command-line front end.

Exit codes: 0 on success, 1 on a verification failure, 2 on usage or I/O
errors. All commands are deterministic given --seed and their inputs.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time

from . import bilinear, cfft, oracle, slp
from .gf import Field

MATRIX_NAMES = {}


def _matrix_by_name(name: str):
    global MATRIX_NAMES
    if not MATRIX_NAMES:
        t5 = bilinear.t5_matrices()
        c11 = bilinear.conv11_matrices()
        pis = bilinear.coefficient_maps() + bilinear.input_maps()
        MATRIX_NAMES = {
            "T": bilinear.forward_matrix(),
            "S": bilinear.output_matrix(),
            "PI0": pis[0],
            "PI1": pis[1],
            "PI2": pis[2],
            "PI3": pis[3],
            "PI4": pis[4],
            "PI5": pis[5],
            "PT5": t5.p,
            "RT5": t5.r,
            "QT5": t5.q,
            "P11": c11.p,
            "R11": c11.r,
            "Q11": c11.q,
        }
    return MATRIX_NAMES[name]


def _read_hex_vector(path: str, n: int):
    with open(path) as fh:
        vals = [int(ln.strip(), 16) for ln in fh if ln.strip()]
    if len(vals) != n:
        raise ValueError(f"{path}: expected {n} elements, found {len(vals)}")
    if any(v < 0 or v > 0x7FF for v in vals):
        raise ValueError(f"{path}: element out of range 0x000..0x7ff")
    return vals


def _write_hex_vector(path: str, vals):
    with open(path, "w") as fh:
        for v in vals:
            fh.write(f"0x{v:03x}\n")


def _load_or_build_plan(args, field: Field) -> cfft.CfftPlan:
    if getattr(args, "plan", None):
        with open(args.plan) as fh:
            return cfft.plan_from_json(fh.read())
    return cfft.build_plan(field, args.n)


def cmd_cosets(args) -> int:
    table = cfft.cosets(args.n)
    census = table.census()
    if args.format == "json":
        print(json.dumps({
            "n": table.n,
            "census": {str(k): v for k, v in sorted(census.items())},
            "cosets": [list(c) for c in table.cosets],
        }))
        return 0
    summary = ", ".join(f"{v}xsize-{k}" for k, v in sorted(census.items()))
    print(f"{len(table.cosets)} cosets: {summary}")
    for c in table.cosets:
        print(f"  [{c[0]:4d}] size {len(c):2d}: {' '.join(str(m) for m in c)}")
    return 0


def cmd_plan(args) -> int:
    field = Field()
    plan = cfft.build_plan(field, args.n)
    text = cfft.plan_to_json(plan)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(
        f"wrote plan n={plan.n} to {args.out}: "
        f"{len(plan.constants)} constants, mult_count={plan.mult_count}, "
        f"add_count={plan.add_count}"
    )
    return 0


def cmd_eval(args) -> int:
    field = Field()
    plan = _load_or_build_plan(args, field)
    vec = _read_hex_vector(args.infile, plan.n)
    out = cfft.evaluate(plan, vec)
    _write_hex_vector(args.out, out)
    print(f"evaluated n={plan.n}: {args.infile} -> {args.out}")
    return 0


def _first_mismatch(got, want):
    for i, (g, w) in enumerate(zip(got, want)):
        if g != w:
            return i
    return None


def cmd_verify(args) -> int:
    field = Field()
    rng = random.Random(args.seed)
    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        if ok:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name}{': ' + detail if detail else ''}")

    # conv11 suite
    ok, detail = True, ""
    for i in range(11):
        x = [0] * 11
        x[i] = 1
        y = [rng.randrange(2048) for _ in range(11)]
        want = oracle.naive_cyclic_conv(field, x, y)
        got = bilinear.conv11_apply(field, x, y)
        if got != want:
            ok, detail = False, f"unit {i}, first mismatch at {_first_mismatch(got, want)}"
            break
    for _ in range(args.trials):
        if not ok:
            break
        x = [rng.randrange(2048) for _ in range(11)]
        y = [rng.randrange(2048) for _ in range(11)]
        want = oracle.naive_cyclic_conv(field, x, y)
        got = bilinear.conv11_apply(field, x, y)
        if got != want:
            ok, detail = False, f"first mismatch at output {_first_mismatch(got, want)}"
    report("conv11 vs naive convolution", ok, detail)

    # Toeplitz suite
    ok, detail = True, ""
    ident5 = [0, 0, 0, 0, 1, 0, 0, 0, 0]
    u5 = [rng.randrange(2048) for _ in range(5)]
    if bilinear.t5_apply(field, ident5, u5) != u5:
        ok, detail = False, "length-5 identity failed"
    ident10 = [0] * 9 + [1] + [0] * 9
    u10 = [rng.randrange(2048) for _ in range(10)]
    if ok and bilinear.t10_apply(field, ident10, u10) != u10:
        ok, detail = False, "length-10 identity failed"
    for _ in range(args.trials):
        if not ok:
            break
        r5 = [rng.randrange(2048) for _ in range(9)]
        u5 = [rng.randrange(2048) for _ in range(5)]
        if bilinear.t5_apply(field, r5, u5) != oracle.naive_toeplitz(field, r5, u5):
            ok, detail = False, "length-5 random mismatch"
            break
        r10 = [rng.randrange(2048) for _ in range(19)]
        u10 = [rng.randrange(2048) for _ in range(10)]
        if bilinear.t10_apply(field, r10, u10) != oracle.naive_toeplitz(field, r10, u10):
            ok, detail = False, "length-10 random mismatch"
    report("Toeplitz products vs naive", ok, detail)

    # integer transform suite
    ok, detail = True, ""
    if not bilinear.verify_toeplitz_reduction([0] * 10):
        ok, detail = False, "zero vector reduction failed"
    for _ in range(args.trials):
        if not ok:
            break
        yp = [rng.randint(-100, 100) for _ in range(10)]
        if not bilinear.verify_toeplitz_reduction(yp):
            ok, detail = False, f"reduction identity failed for {yp}"
            break
        x = [rng.randint(-100, 100) for _ in range(11)]
        y = [rng.randint(-100, 100) for _ in range(11)]
        if bilinear.conv11_int(x, y) != oracle.naive_cyclic_conv_int(x, y):
            ok, detail = False, "integer convolution mismatch"
    report("integer transform identities", ok, detail)

    # transform-plan suite
    ok, detail = True, ""
    plan = _load_or_build_plan(args, field)
    n = plan.n
    units = range(n) if n <= 89 else range(20)
    for i in units:
        f = [0] * n
        f[i] = 1
        got = cfft.evaluate(plan, f)
        want = oracle.naive_dft(field, f)
        if got != want:
            ok, detail = False, f"unit {i}, first mismatch at output {_first_mismatch(got, want)}"
            break
    for _ in range(args.trials if n <= 89 else min(args.trials, 20)):
        if not ok:
            break
        f = [rng.randrange(2048) for _ in range(n)]
        got = cfft.evaluate(plan, f)
        want = oracle.naive_dft(field, f)
        if got != want:
            ok, detail = False, f"first mismatch at output {_first_mismatch(got, want)}"
    report(f"transform plan n={n} vs naive DFT", ok, detail)

    return 1 if failures else 0


def cmd_complexity(args) -> int:
    field = Field()
    plan = cfft.build_plan(field, args.n)
    program = slp.compile_plan(plan)
    optimized = slp.greedy_cse(program)
    rows = {
        "n": plan.n,
        "mult": plan.mult_count,
        "add_direct_stages": plan.add_count,
        "add_direct_combined": cfft.combined_add_count(plan),
        "add_after_cse": optimized.xor_count,
    }
    if args.format == "json":
        print(json.dumps(rows))
        return 0
    print(f"n = {rows['n']}")
    print(f"mult = {rows['mult']}")
    print(f"add(direct, per-stage) = {rows['add_direct_stages']}")
    print(f"add(direct, combined output matrix) = {rows['add_direct_combined']}")
    print(f"add(cse) = {rows['add_after_cse']}")
    return 0


def cmd_bench(args) -> int:
    field = Field()
    rng = random.Random(args.seed)
    plan = cfft.build_plan(field, args.n)
    vecs = [[rng.randrange(2048) for _ in range(args.n)] for _ in range(args.trials)]
    plan_times, naive_times = [], []
    for v in vecs:
        t0 = time.perf_counter()
        got = cfft.evaluate(plan, v)
        plan_times.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        want = oracle.naive_dft(field, v)
        naive_times.append(time.perf_counter() - t0)
        if got != want:
            print("FAIL bench outputs disagree with the oracle")
            return 1
    pm = statistics.median(plan_times)
    nm = statistics.median(naive_times)
    print(f"n = {args.n}, trials = {args.trials}")
    print(f"plan evaluation median: {pm * 1e3:.3f} ms")
    print(f"naive DFT median:       {nm * 1e3:.3f} ms")
    print(f"speedup: {nm / pm:.2f}x")
    return 0


def cmd_dump(args) -> int:
    print(_matrix_by_name(args.name).to_text())
    return 0


def cmd_cse(args) -> int:
    field = Field()
    plan = cfft.build_plan(field, args.n)
    program = slp.compile_plan(plan)
    optimized = slp.greedy_cse(program)
    print(
        f"n={args.n}: xor {program.xor_count} -> {optimized.xor_count}, "
        f"cmul {program.cmul_count} -> {optimized.cmul_count}"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(optimized.to_text())
        print(f"wrote optimized program to {args.out}")
    return 0


def cmd_emit(args) -> int:
    field = Field()
    plan = cfft.build_plan(field, args.n)
    program = slp.compile_plan(plan)
    if args.cse:
        program = slp.greedy_cse(program)
    with open(args.out, "w") as fh:
        fh.write(program.to_text())
    print(
        f"wrote program n={args.n} to {args.out}: "
        f"xor={program.xor_count}, cmul={program.cmul_count}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cfft2047",
        description="Build, run, verify and account DFT plans over GF(2^11).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_n(p):
        p.add_argument("--n", type=int, required=True,
                       help="transform length (must divide 2047)")

    p = sub.add_parser("cosets", help="print the cyclotomic coset table")
    add_n(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_cosets)

    p = sub.add_parser("plan", help="build a plan and write it as JSON")
    add_n(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("eval", help="apply a plan to a hex vector file")
    add_n(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plan", help="load this plan file instead of rebuilding")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the oracle suites")
    add_n(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plan", help="verify this plan file instead of a fresh build")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("complexity", help="print operation counts")
    add_n(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("bench", help="time plan evaluation against the naive DFT")
    add_n(p)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dump", help="print a named matrix as 0/1 rows")
    p.add_argument("name", choices=(
        "T", "S", "PI0", "PI1", "PI2", "PI3", "PI4", "PI5",
        "PT5", "RT5", "QT5", "P11", "R11", "Q11",
    ))
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("cse", help="compile a plan and reduce its xor count")
    add_n(p)
    p.add_argument("--out", help="also write the optimized program text")
    p.set_defaults(func=cmd_cse)

    p = sub.add_parser("emit", help="compile a plan and write the program text")
    add_n(p)
    p.add_argument("--out", required=True)
    p.add_argument("--cse", action="store_true", help="apply greedy CSE first")
    p.set_defaults(func=cmd_emit)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
