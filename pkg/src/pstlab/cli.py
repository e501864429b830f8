"""``pstlab`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 domain failure (the JSON
on stdout carries an ``error`` code), 3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .dynamics import PST_TOL, fidelity_trace, verify_internal_pairs, verify_pst
from .errors import PSTError
from .hamiltonian import PathHamiltonian, SymmetricTree, build_symmetric_tree
from .numbers import fmt, parse_time
from .spectra import Kind, Spectrum, normalize_parity, parse_values
from .synthesis import (
    AUTO,
    Certificate,
    laplacian_infeasibility,
    laplacian_search_falsifier,
    rationality_certificate,
    rationality_scan,
    reconstruct,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

# options whose values may legitimately start with "-"
_VALUE_FLAGS = ("--spectrum", "--time", "--t-max")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _join_negative_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _pair(text: str) -> tuple[int, int]:
    try:
        j, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"pair must look like 'j,k', got {text!r}")
    return j, k


def _time(text: str):
    try:
        return parse_time(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pstlab", description="Perfect state transfer chains: synthesis, "
                                            "verification and certificates.")
    p.add_argument("--version", action="version", version=f"pstlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="reconstruct a mirror-symmetric chain from a spectrum")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--spectrum", help='comma separated eigenvalues, e.g. "-4,-2,0,2,4"')
    src.add_argument("--input", type=Path, help="spectrum JSON file")
    s.add_argument("--kind", choices=[k.value for k in Kind], default=None)
    s.add_argument("--time", default=AUTO,
                   help='readout time ("pi", "pi/2", decimal); default infers the earliest one')
    s.add_argument("--out", type=Path)

    v = sub.add_parser("verify", help="check transfer fidelity by unitary evolution")
    v.add_argument("--input", type=Path, required=True, help="Hamiltonian or symmetric-tree JSON")
    v.add_argument("--pair", type=_pair, help="vertices j,k (default 1,n)")
    v.add_argument("--time", type=_time, required=True)
    v.add_argument("--tol", type=float, default=PST_TOL)
    v.add_argument("--out", type=Path)

    c = sub.add_parser("certify", help="exact no-go and irrationality certificates")
    c.add_argument("claim", choices=["laplacian", "rational"])
    c.add_argument("--n", type=int)
    c.add_argument("--spectrum")
    c.add_argument("--input", type=Path, help="spectrum JSON file")
    c.add_argument("--scan", action="store_true", help="certify seeded random spectra")
    c.add_argument("--search", action="store_true",
                   help="laplacian: exhaustively try small spectra as well")
    c.add_argument("--max-eig", type=int, default=15)
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("--out", type=Path)

    t = sub.add_parser("trace", help="fidelity time series as CSV")
    t.add_argument("--input", type=Path, required=True)
    t.add_argument("--pair", type=_pair)
    t.add_argument("--t-max", type=_time, required=True)
    t.add_argument("--steps", type=int, required=True)
    t.add_argument("--out", type=Path)
    return p


def _read_json(path: Path):
    text = path.read_text()  # OSError -> exit 3
    return json.loads(text)  # ValueError -> exit 1


def _load_spectrum(args) -> Spectrum:
    if args.input is not None:
        obj = _read_json(args.input)
        if getattr(args, "kind", None):
            obj = {**obj, "kind": args.kind}
        return Spectrum.from_json(obj)
    if args.spectrum is None:
        raise UsageError("give --spectrum or --input")
    return Spectrum.of(parse_values(args.spectrum), getattr(args, "kind", None) or "adjacency")


def _load_operator(path: Path):
    obj = _read_json(path)
    if "edges" in obj:
        return build_symmetric_tree(SymmetricTree.from_json(obj)).matrix
    return PathHamiltonian.from_json(obj)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_synth(args) -> dict:
    s = _load_spectrum(args)
    return reconstruct(s, t0=args.time).to_json()


def cmd_verify(args) -> dict:
    h = _load_operator(args.input)
    n = h.n if isinstance(h, PathHamiltonian) else h.shape[0]
    j, k = args.pair or (1, n)
    ok, res = verify_pst(h, j, k, args.time, args.tol)
    out = {
        "pair": [j, k],
        "time": fmt(args.time),
        "fidelity": res.fidelity,
        "pst": bool(ok),
        "tol": args.tol,
        "phase": None if res.phase is None else [res.phase.real, res.phase.imag],
    }
    if ok and {j, k} == {1, n}:
        rep = verify_internal_pairs(h, args.time, args.tol)
        out["internal_pairs"] = [
            {"pair": list(r.pair), "fidelity": r.fidelity, "pst": r.fidelity >= 1.0 - args.tol}
            for r in rep.pairs
        ]
        out["all_internal_pst"] = rep.all_pst
        out["zero_entry_vertices"] = list(rep.zero_entry_vertices)
    return out


def _certificate_json(cert: Certificate) -> dict:
    return {"outcome": "certified", "verified": cert.verify(), **cert.to_json()}


def cmd_certify(args) -> dict:
    if args.claim == "laplacian":
        if args.n is None:
            raise UsageError("certify laplacian needs --n")
        out = _certificate_json(laplacian_infeasibility(args.n))
        if args.search:
            out["search"] = laplacian_search_falsifier(args.n, args.max_eig).to_json()
        return out
    if args.scan:
        if args.n is None:
            raise UsageError("--scan needs --n")
        if args.count < 1:
            raise UsageError("--count must be positive")
        return rationality_scan(args.n, args.count, args.seed, args.workers).to_json()
    s = _load_spectrum(args)
    if args.n is not None and args.n != s.n:
        raise UsageError(f"--n {args.n} disagrees with a spectrum of length {s.n}")
    s, shift = normalize_parity(s)
    res = rationality_certificate(s)
    out = _certificate_json(res) if isinstance(res, Certificate) else res.to_json()
    out["shift"] = fmt(shift)
    return out


def cmd_trace(args) -> str:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    h = _load_operator(args.input)
    n = h.n if isinstance(h, PathHamiltonian) else h.shape[0]
    j, k = args.pair or (1, n)
    return fidelity_trace(h, j, k, args.t_max, args.steps).to_csv()


_COMMANDS = {"synth": cmd_synth, "verify": cmd_verify, "certify": cmd_certify, "trace": cmd_trace}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_negative_values(argv))
        result = _COMMANDS[args.command](args)
        _emit(result if isinstance(result, str) else dumps(result), args.out)
        return EXIT_OK
    except UsageError as exc:
        sys.stderr.write(f"pstlab: usage error: {exc}\n")
        return EXIT_USAGE
    except PSTError as exc:
        sys.stdout.write(dumps({"error": exc.code, "message": str(exc)}))
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"pstlab: I/O error: {exc}\n")
        return EXIT_IO
    except (ValueError, TypeError, KeyError) as exc:
        sys.stderr.write(f"pstlab: could not parse input: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
