"""Command-line entry point: ``chaoskey <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 key error. Failures are
reported on stderr as one JSON line ``{"error": code, "message": ...}``.
The secret comes from ``--secret`` or, failing that, ``$CHAOSKEY_SECRET``;
prefer the environment variable to keep secrets out of shell history.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, bench, cipher, cryptanalysis, text_indexer
from .chaos import ChaosParams, initial_condition, quantize
from .errors import ChaosKeyError, DataError, KeyMaterialError
from .keyschedule import keystream, trace_cycles
from .kgm import DEFAULT_SEED, build_matrix, first_key

SECRET_ENV = "CHAOSKEY_SECRET"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_KEY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int(text: str) -> int:
    return int(text, 0)


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _secret(args) -> str:
    if args.secret is not None:
        return args.secret
    if SECRET_ENV in os.environ:
        return os.environ[SECRET_ENV]
    raise UsageError(f"no secret given (use --secret or ${SECRET_ENV})")


def _params(hardened: bool) -> ChaosParams:
    return ChaosParams.hardened() if hardened else ChaosParams.literal()


def _read_input(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_output(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def _as_text(data: bytes) -> str:
    return data.decode("utf-8", "surrogateescape")


def _as_bytes(text: str) -> bytes:
    return text.encode("utf-8", "surrogateescape")


def cmd_keygen(args) -> int:
    m = build_matrix(args.seed)
    if args.dump_matrix:
        print(json.dumps(m.to_json(), ensure_ascii=False))
        return EXIT_OK
    secret = _secret(args)
    if args.stage == "first":
        print(first_key(secret, m).chars)
        return EXIT_OK
    k1 = first_key(secret, m).to_bytes()
    if args.stage == "x0":
        st = initial_condition(k1, args.cycle)
        q = quantize(st.x0)
        print(f"x01={st.x01!r}\nx02={st.x02!r}\nx0={st.x0!r}\nbyte={q} ({q:08b})")
        return EXIT_OK
    params = _params(args.hardened)
    if args.trace:
        print("cycle k1       k2       k3       final")
        for t in trace_cycles(k1, params):
            kb = t.key
            print(f"{t.cycle:<5} {kb.k1_byte:08b} {kb.k2_byte:08b} {kb.k3_byte:08b} {kb.final_byte:08b}")
    length = args.len if args.len is not None else len(k1)
    print(keystream(secret, length, params, m).data.hex())
    return EXIT_OK


def cmd_index(args) -> int:
    text = _as_text(_read_input(args.in_path))
    msg = text_indexer.index_encode(text)
    if args.tokens:
        lines = [json.dumps({"ref": t.back_ref, "word": t.word}, ensure_ascii=False)
                 for t in msg.tokens]
        _write_output(args.out, _as_bytes("".join(line + "\n" for line in lines)))
    else:
        _write_output(args.out, _as_bytes(text_indexer.render(msg)))
    return EXIT_OK


def cmd_encrypt(args) -> int:
    secret = _secret(args)
    text = _as_text(_read_input(args.in_path))
    mode = cipher.MODE_HARDENED if args.mode == "hardened" else cipher.MODE_LITERAL
    env = cipher.encrypt(text, secret, mode=mode, index=not args.no_index, seed=args.seed)
    _write_output(args.out, env.to_bytes())
    return EXIT_OK


def cmd_decrypt(args) -> int:
    secret = _secret(args)
    env = cipher.CiphertextEnvelope.from_bytes(_read_input(args.in_path))
    _write_output(args.out, _as_bytes(cipher.decrypt(env, secret)))
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.analysis == "bounds":
        b = cryptanalysis.trail_bound(cryptanalysis.TrailParams(args.active, args.log2))
        if args.json:
            print(json.dumps({"active": args.active, "per_box_log2": args.log2,
                              "log2": b.log2, "exponent": b.exponent}))
        else:
            print(b)
        return EXIT_OK
    report = cryptanalysis.avalanche(_secret(args), args.trials, _params(args.hardened),
                                     build_matrix(args.seed))
    print(json.dumps(report.as_dict()))
    return EXIT_OK


def cmd_bench(args) -> int:
    params = _params(args.hardened)
    if args.target == "keygen":
        report = bench.run_bench(args.sizes or bench.DEFAULT_SIZES_KB, params,
                                 reps=args.reps, parallel=args.parallel)
    else:
        report = bench.cycle_time(args.sizes or bench.DEFAULT_KEY_SIZES, params, reps=args.reps)
    payload = json.dumps(report.to_json(), indent=2)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chaoskey", description="Chaotic key scheduling and XOR stream encryption.")
    p.add_argument("--version", action="version",
                   version=f"chaoskey {__version__}, envelope format {cipher.VERSION}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def secret_opt(sp):
        sp.add_argument("--secret", help=f"secret key (default: ${SECRET_ENV})")

    def seed_opt(sp):
        sp.add_argument("--seed", type=_int, default=DEFAULT_SEED, help="matrix seed")

    kg = sub.add_parser("keygen", help="derive first key, initial condition or keystream")
    secret_opt(kg)
    seed_opt(kg)
    kg.add_argument("--stage", choices=["first", "x0", "stream"], default="stream")
    kg.add_argument("--cycle", type=int, default=0)
    kg.add_argument("--len", type=int)
    kg.add_argument("--hardened", action="store_true")
    kg.add_argument("--trace", action="store_true", help="print per-cycle key bytes in binary")
    kg.add_argument("--dump-matrix", action="store_true", help="print the matrix as JSON")
    kg.set_defaults(func=cmd_keygen)

    ix = sub.add_parser("index", help="word-level LZ78 indexing of text")
    ix.add_argument("--in", dest="in_path")
    ix.add_argument("--out")
    ix.add_argument("--tokens", action="store_true", help="emit JSON-lines tokens")
    ix.set_defaults(func=cmd_index)

    enc = sub.add_parser("encrypt")
    secret_opt(enc)
    seed_opt(enc)
    enc.add_argument("--in", dest="in_path")
    enc.add_argument("--out")
    enc.add_argument("--mode", choices=["literal", "hardened"], default="literal")
    enc.add_argument("--no-index", action="store_true")
    enc.set_defaults(func=cmd_encrypt)

    dec = sub.add_parser("decrypt")
    secret_opt(dec)
    dec.add_argument("--in", dest="in_path")
    dec.add_argument("--out")
    dec.set_defaults(func=cmd_decrypt)

    an = sub.add_parser("analyze")
    an_sub = an.add_subparsers(dest="analysis", required=True, parser_class=_Parser)
    bd = an_sub.add_parser("bounds")
    bd.add_argument("--active", type=int, required=True)
    bd.add_argument("--log2", type=float, required=True)
    bd.add_argument("--json", action="store_true")
    av = an_sub.add_parser("avalanche")
    secret_opt(av)
    seed_opt(av)
    av.add_argument("--trials", type=int, default=200)
    av.add_argument("--hardened", action="store_true")
    an.set_defaults(func=cmd_analyze)

    bn = sub.add_parser("bench")
    bn.add_argument("target", choices=["keygen", "cycle"])
    bn.add_argument("--sizes", type=_csv_ints, help="KB for keygen, first-key bytes for cycle")
    bn.add_argument("--reps", type=int, default=5)
    bn.add_argument("--json", metavar="FILE")
    bn.add_argument("--hardened", action="store_true")
    bn.add_argument("--parallel", action="store_true")
    bn.set_defaults(func=cmd_bench)
    return p


def _fail(code: str, message: str, status: int) -> int:
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        return _fail("UsageError", str(e), EXIT_USAGE)
    except KeyMaterialError as e:
        return _fail(e.code, str(e), EXIT_KEY)
    except DataError as e:
        return _fail(e.code, str(e), EXIT_DATA)
    except ChaosKeyError as e:
        return _fail(e.code, str(e), EXIT_USAGE)
    except (ValueError, OSError) as e:
        return _fail(type(e).__name__, str(e), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
