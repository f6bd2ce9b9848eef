"""Command-line front end.

Output is one ``key=value`` per line.  Exit status: 0 when a decision or
value was computed (YES and NO alike), 1 when ``verify`` finds a mismatch,
2 on bad input, 3 when an exact oracle refuses an input above its desk bound.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import DEFAULT_TAU
from .multipass_vc import vc_branching, vc_iterative_compression
from .oracles import (
    CnfInstance,
    DeskBoundExceeded,
    StoredGraph,
    domset_min,
    format_dimacs,
    fvs_min,
    girth,
    longest_path_length,
    min_cover_branching,
    read_dimacs,
    sat2_solve,
    satd_brute,
    treewidth_exact,
    vc_min,
)
from .reductions import (
    REDUCTIONS,
    IndexInstance,
    PermInstance,
    extract_bit_via_solver,
    generate,
    parse_bits,
    random_index_instance,
    random_perm_instance,
    sample_domset_est,
)
from .stream import Model, ModelError, SpaceLedger, StreamError, read_stream, write_stream
from .threshold import (
    BIDIMENSIONAL_PROBLEMS,
    bidimensional_decide,
    k_fvs_decide,
    k_path_decide,
    k_treewidth_decide,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_DESK_BOUND = 3

RUN_PROBLEMS = ("vc-branching", "vc-ic", "path", "treewidth", "fvs", "sat-naive")
ORACLE_PROBLEMS = ("vc", "path", "fvs", "treewidth", "girth", "domset", "sat2", "satd")
GEN_REDUCTIONS = REDUCTIONS + ("domset-est",)


class InputError(ValueError):
    """Bad command-line input (reported with exit status 2)."""


@dataclass
class RunReport:
    problem: str
    k: int
    model: str
    decision: bool
    passes: int
    peak_words: int
    witness: object = None
    threshold: int | None = None
    wall_time: float = 0.0

    def lines(self) -> list[str]:
        out = [
            f"problem={self.problem}",
            f"k={self.k}",
            f"model={self.model}",
            f"decision={'YES' if self.decision else 'NO'}",
            f"witness={_format_witness(self.witness)}",
            f"passes={self.passes}",
            f"peak_words={self.peak_words}",
        ]
        if self.threshold is not None:
            out.append(f"threshold={self.threshold}")
        out.append(f"wall_time={self.wall_time:.6f}")
        return out


def _format_witness(w) -> str:
    if w is None:
        return "-"
    if isinstance(w, (set, frozenset)):
        w = sorted(w)
    return ",".join(map(str, w)) if w else "{}"


def _emit(lines: Sequence[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


# -- run -------------------------------------------------------------------------

def sat_naive(cnf: CnfInstance) -> tuple[bool, int]:
    """Keep every clause of the stream, then solve; returns the answer and
    the words held (one per stored literal)."""
    ledger = SpaceLedger()
    stored = []
    for clause in cnf.clauses:
        stored.append(clause)
        ledger.charge(max(1, len(clause)))
    kept = CnfInstance(cnf.num_vars, tuple(stored))
    answer = sat2_solve(kept) if kept.width <= 2 else satd_brute(kept)
    return answer, ledger.peak_words


def cmd_run(args: argparse.Namespace) -> int:
    problem = args.problem
    if problem not in RUN_PROBLEMS and not problem.startswith("bidim:"):
        raise InputError(f"unknown problem {problem!r}; choose from {', '.join(RUN_PROBLEMS)} or bidim:<name>")
    if args.k < 0:
        raise InputError("--k must be non-negative")
    start = time.perf_counter()
    if problem == "sat-naive":
        cnf = read_dimacs(args.input)
        answer, words = sat_naive(cnf)
        report = RunReport(problem, args.k, "clause-stream", answer, 1, words)
    else:
        stream = read_stream(args.input)
        if args.model is not None and Model.parse(args.model) is not stream.model:
            raise InputError(f"--model {args.model} but the file declares {stream.model.value}")
        model = stream.model.value
        if problem in ("vc-branching", "vc-ic"):
            algo = vc_branching if problem == "vc-branching" else vc_iterative_compression
            out = algo(stream, args.k)
            report = RunReport(problem, args.k, model, out.decision, out.passes, out.peak_words, out.cover)
        else:
            if problem == "path":
                if args.k < 1:
                    raise InputError("path needs --k >= 1")
                out = k_path_decide(stream, args.k, seed=args.seed)
            elif problem == "treewidth":
                out = k_treewidth_decide(stream, args.k, seed=args.seed)
            elif problem == "fvs":
                out = k_fvs_decide(stream, args.k, seed=args.seed)
            else:
                name = problem.split(":", 1)[1]
                if name not in BIDIMENSIONAL_PROBLEMS:
                    raise InputError(f"unknown bidimensional problem {name!r}; known: {', '.join(BIDIMENSIONAL_PROBLEMS)}")
                if args.tau < 1:
                    raise InputError("--tau must be at least 1")
                out = bidimensional_decide(stream, args.k, name, tau=args.tau, seed=args.seed)
            report = RunReport(
                problem, args.k, model, out.decision, out.passes, out.peak_words, out.witness, out.threshold
            )
    report.wall_time = time.perf_counter() - start
    _emit(report.lines())
    return EXIT_OK


# -- oracle ----------------------------------------------------------------------

def cmd_oracle(args: argparse.Namespace) -> int:
    problem = args.problem
    if problem not in ORACLE_PROBLEMS:
        raise InputError(f"unknown oracle {problem!r}; choose from {', '.join(ORACLE_PROBLEMS)}")
    if problem in ("sat2", "satd"):
        cnf = read_dimacs(args.input)
        value = sat2_solve(cnf) if problem == "sat2" else satd_brute(cnf)
        _emit([f"problem={problem}", f"value={'SAT' if value else 'UNSAT'}"])
        return EXIT_OK
    g = StoredGraph.from_stream(read_stream(args.input))
    witness = None
    if problem == "vc":
        value, witness = vc_min(g)
    elif problem == "path":
        value = longest_path_length(g)
    elif problem == "fvs":
        value, witness = fvs_min(g)
    elif problem == "treewidth":
        value = treewidth_exact(g)
    elif problem == "girth":
        value = girth(g)
    else:
        value, witness = domset_min(g)
    shown = "inf" if value == float("inf") else str(int(value))
    _emit([f"problem={problem}", f"value={shown}", f"witness={_format_witness(witness)}"])
    return EXIT_OK


# -- gen / verify ------------------------------------------------------------------

def _parse_params(items: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not key=value")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _int_param(params: dict, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise InputError(f"missing parameter {key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise InputError(f"parameter {key} must be an integer, got {params[key]!r}") from None


def build_instance(reduction: str, params: dict, rng: random.Random) -> PermInstance | IndexInstance:
    if reduction.startswith("perm-"):
        N = _int_param(params, "N", 4)
        if "delta" in params or "I" in params:
            delta = tuple(int(x) for x in params.get("delta", ",".join(map(str, range(1, N + 1)))).split(","))
            return PermInstance(N, delta, _int_param(params, "I", 1))
        return random_perm_instance(N, rng)
    if "B" in params:
        return IndexInstance(parse_bits(params["B"]), _int_param(params, "I", 1))
    return random_index_instance(_int_param(params, "N", 4), rng)


def _truth_path(out: Path) -> Path:
    return out.with_name(out.name + ".truth")


def _sets_path(out: Path) -> Path:
    return out.with_name(out.name + ".sets")


def cmd_gen(args: argparse.Namespace) -> int:
    reduction = args.reduction
    if reduction not in GEN_REDUCTIONS:
        raise InputError(f"unknown reduction {reduction!r}; choose from {', '.join(GEN_REDUCTIONS)}")
    params = _parse_params(args.params)
    out = Path(args.out)
    comments = [f"reduction {reduction}", f"seed {args.seed}"] + [f"param {k}={v}" for k, v in sorted(params.items())]
    if reduction == "domset-est":
        theta = params.get("theta")
        sample = sample_domset_est(
            _int_param(params, "n", 64),
            _int_param(params, "beta", 32),
            seed=args.seed,
            theta=None if theta is None else _int_param(params, "theta"),
        )
        write_stream(sample.stream(), out, comments + [f"theta {sample.theta}", f"i_star {sample.i_star}"])
        sets = sample.closed_sets()
        _sets_path(out).write_text(
            f"sets {len(sets)}\n" + "".join(f"{v}: {' '.join(map(str, sorted(s)))}\n" for v, s in enumerate(sets))
        )
        opt = len(min_cover_branching(sample.neighbourhoods))
        _truth_path(out).write_text(f"truth opt={opt}\n")
        _emit([f"reduction={reduction}", f"out={out}", f"opt={opt}", f"theta={sample.theta}"])
        return EXIT_OK
    instance = build_instance(reduction, params, random.Random(args.seed))
    gen = generate(reduction, instance)
    comments += [f"instance {k}={v}" for k, v in sorted(gen.params.items())]
    if isinstance(gen.payload, CnfInstance):
        out.write_text(format_dimacs(gen.payload, comments))
    else:
        write_stream(gen.payload, out, comments)
    _truth_path(out).write_text(f"truth bit={gen.truth}\n")
    _emit([f"reduction={reduction}", f"out={out}", f"bit={gen.truth}"])
    return EXIT_OK


def _read_truth(path: Path) -> tuple[str, int]:
    sidecar = _truth_path(path)
    try:
        text = sidecar.read_text()
    except OSError as exc:
        raise InputError(f"cannot read truth sidecar {sidecar}: {exc}") from None
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 2 and parts[0] == "truth" and "=" in parts[1]:
            key, value = parts[1].split("=", 1)
            if key in ("bit", "opt") and value.isdigit():
                return key, int(value)
    raise InputError(f"no 'truth bit=<0|1>' or 'truth opt=<v>' line in {sidecar}")


def _read_sets(path: Path) -> list[int]:
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("sets "):
        raise InputError(f"{path}: expected header 'sets <count>'")
    count = int(lines[0].split()[1])
    masks = [0] * count
    for lineno, line in enumerate(lines[1:], start=2):
        head, _, rest = line.partition(":")
        try:
            v = int(head)
            members = [int(x) for x in rest.split()]
        except ValueError:
            raise InputError(f"{path} line {lineno}: cannot parse {line!r}") from None
        if not 0 <= v < count or any(not 0 <= x < count for x in members):
            raise InputError(f"{path} line {lineno}: vertex out of range")
        for x in members:
            masks[v] |= 1 << x
    return masks


def cmd_verify(args: argparse.Namespace) -> int:
    reduction = args.reduction
    if reduction not in GEN_REDUCTIONS:
        raise InputError(f"unknown reduction {reduction!r}; choose from {', '.join(GEN_REDUCTIONS)}")
    path = Path(args.path)
    key, expected = _read_truth(path)
    if reduction == "domset-est":
        got = len(min_cover_branching(_read_sets(_sets_path(path))))
    else:
        payload = read_dimacs(path) if reduction == "index-2sat" else read_stream(path)
        got = extract_bit_via_solver(reduction, payload)
    ok = got == expected
    _emit([f"reduction={reduction}", f"expected_{key}={expected}", f"got_{key}={got}", f"result={'pass' if ok else 'fail'}"])
    return EXIT_OK if ok else EXIT_MISMATCH


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramstream", description="Parameterized streaming graph algorithms.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a streaming algorithm on a stream or clause file")
    run.add_argument("problem", help=f"{', '.join(RUN_PROBLEMS)} or bidim:<{'|'.join(BIDIMENSIONAL_PROBLEMS)}>")
    run.add_argument("--k", type=int, required=True)
    run.add_argument("--input", required=True)
    run.add_argument("--model", choices=[m.value for m in Model])
    run.add_argument("--tau", type=int, default=DEFAULT_TAU)
    run.add_argument("--seed", type=int, default=0, help="fingerprint seed for insert-delete sketches")
    run.set_defaults(func=cmd_run)

    oracle = sub.add_parser("oracle", help="exact offline value of a stored graph or CNF")
    oracle.add_argument("problem", choices=ORACLE_PROBLEMS)
    oracle.add_argument("--input", required=True)
    oracle.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", help="write a hard instance and its truth sidecar")
    gen.add_argument("reduction", choices=GEN_REDUCTIONS)
    gen.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="decode a generated instance and compare with its sidecar")
    verify.add_argument("reduction", choices=GEN_REDUCTIONS)
    verify.add_argument("path")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DeskBoundExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DESK_BOUND
    except (InputError, StreamError, ModelError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
