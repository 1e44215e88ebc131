"""Command line entry point: ``ansbounds {encode,decode,stats,adversarial,bench}``.

Exit status is 0 on success, 1 on usage errors and 2 on data or validation
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .adversarial import build_adversarial, lower_bound_bits, verify_alternation
from .analysis import SweepGrid, measure, report_dict, sweep, write_csv
from .container import CODEC_IDS, decode_bytes, default_r, encode_bytes
from .errors import ContainerError, ContractError, DecodeError
from .model import count_frequencies, normalize
from .spread import SPREADS

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def cmd_encode(args) -> int:
    if args.codec != "rans" and args.k:
        raise UsageError("--k applies only to --codec rans")
    blob = encode_bytes(_read(args.input), args.codec, args.k, args.r)
    _write(args.output, blob)
    return EXIT_OK


def cmd_decode(args) -> int:
    _write(args.output, decode_bytes(_read(args.input)))
    return EXIT_OK


def cmd_stats(args) -> int:
    letters = list(_read(args.input))
    sigma = max(letters) + 1 if letters else 1
    counts = count_frequencies(letters, sigma)
    if not letters:
        raise ContractError("input is empty; nothing to measure")
    r = args.r if args.r is not None else default_r(counts)
    table = normalize(counts, r)
    k = args.k if args.codec == "rans" else 0
    report = measure(args.codec, letters, table, k=k)
    if args.json:
        print(json.dumps(report_dict(report), indent=2))
    else:
        for key, value in report_dict(report).items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_adversarial(args) -> int:
    inst = build_adversarial(args.r)
    bound = lower_bound_bits(inst.sigma, inst.r)
    print(f"r: {inst.r}")
    print(f"n: {inst.n}")
    print(f"sigma: {inst.sigma}")
    print(f"bound: {bound:g}")
    if args.output:
        doc = {"r": inst.r, "n": inst.n, "sigma": inst.sigma,
               "frequencies": list(inst.table.freq), "sequence": list(inst.sequence)}
        with open(args.output, "w") as fh:
            json.dump(doc, fh)
    if not args.verify:
        return EXIT_OK
    ok = True
    for name in ("simplified", "precise"):
        spread = SPREADS[name](inst.table)
        canonical = bool((spread.layout == inst.canonical_layout()).all())
        try:
            steps = verify_alternation(inst, spread).steps
            alternation = f"{steps}/{inst.n - 1} steps"
        except ContractError as exc:
            alternation, steps = f"FAILED at {exc}", 0
        rep = measure(f"tans-{name}", inst.sequence, inst.table,
                      paper_push_order=True, bound="thm3")
        passed = canonical and steps == inst.n - 1 and rep.bound_satisfied
        ok = ok and passed
        print(f"tans-{name}: canonical_layout={canonical} alternation={alternation} "
              f"redundancy={rep.redundancy:.6f} bound={bound:g} "
              f"{'PASS' if passed else 'FAIL'}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_DATA


def _parse_grid(text: str) -> SweepGrid:
    """``sigma=2,16;r=8,12;k=0,3;shape=zipf;codec=rans;reps=2;seed=7``."""
    keys = {"sigma": "sigmas", "r": "rs", "k": "ks", "shape": "shapes",
            "codec": "codecs", "reps": "reps", "seed": "seed"}
    grid = SweepGrid()
    for part in filter(None, (p.strip() for p in text.split(";"))):
        name, sep, values = part.partition("=")
        if not sep or name.strip() not in keys:
            raise UsageError(f"bad grid entry {part!r}")
        attr = keys[name.strip()]
        items = [v.strip() for v in values.split(",") if v.strip()]
        if attr in ("shapes", "codecs"):
            setattr(grid, attr, items)
        else:
            try:
                nums = [int(v) for v in items]
            except ValueError:
                raise UsageError(f"bad integer in grid entry {part!r}") from None
            if attr in ("reps", "seed"):
                if len(nums) != 1:
                    raise UsageError(f"{name} takes one value")
                setattr(grid, attr, nums[0])
            else:
                setattr(grid, attr, nums)
    return grid


def cmd_bench(args) -> int:
    grid = _parse_grid(args.grid)
    text = write_csv(sweep(grid))
    if args.output and args.output != "-":
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ansbounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("encode", help="compress a file into an ANSC container")
    e.add_argument("--codec", choices=sorted(CODEC_IDS), default="tans-precise")
    e.add_argument("--k", type=int, default=0, help="rANS accuracy (0..8)")
    e.add_argument("--r", type=int, default=None,
                   help="table exponent; default fits the distinct byte count")
    e.add_argument("--input", required=True)
    e.add_argument("--output", required=True)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="restore a file from an ANSC container")
    d.add_argument("--input", required=True)
    d.add_argument("--output", required=True)
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("stats", help="print a redundancy report for a file")
    s.add_argument("--input", required=True)
    s.add_argument("--codec", choices=sorted(CODEC_IDS) + ["tans-identity"],
                   default="tans-precise")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    a = sub.add_parser("adversarial", help="build and check the lower-bound instance")
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--verify", action="store_true")
    a.add_argument("--output", help="write the instance as JSON")
    a.set_defaults(func=cmd_adversarial)

    b = sub.add_parser("bench", help="run a redundancy sweep and emit CSV")
    b.add_argument("--grid", default="", help="e.g. 'sigma=2,16;r=8;codec=rans;k=1,3'")
    b.add_argument("--output", default="-")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, ContainerError, DecodeError, OSError) as exc:
        print(f"ansbounds: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
