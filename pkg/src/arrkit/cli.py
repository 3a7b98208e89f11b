"""Command-line interface.

Subcommands: exponents, build, verify, oracle, triple, acceptance.
Exit codes: 0 success/certified, 1 verdict or check failure, 2 usage error.
Basis files are JSON and verify round-trip under the verify subcommand.
Oracle-built bases are cached content-addressed under ARRKIT_CACHE_DIR
(default ~/.cache/arrkit); the cache is append-only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .arrangements import (
    GroupSpec,
    LinearForm,
    MultiArrangement,
    imprimitive_multiarrangement,
    multi_arrangement,
    predict_exponents,
    predict_exponents_general,
)
from .derivations import Derivation, Verdict, ziegler_check
from .flat import load_flat_structure, resolve_flat_config, build_basis_wellgen
from .oracle import arrangement_hash, extract_basis, generator_degrees, oracle_report, triple
from .poly import parse_poly, poly_to_str
from .rank2 import build_basis_imprimitive, rank2_general
from .acceptance import run_all


class UsageError(ValueError):
    pass


@dataclass
class RunRecord:
    command: str
    inputs: dict
    outputs: dict
    wall_time_seconds: float = 0.0
    tool_version: str = __version__

    def dump(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


# -- basis file round trip ----------------------------------------------------

def basis_to_document(basis, arrangement: MultiArrangement, verdict: Verdict,
                      exponents, extra: dict | None = None) -> dict:
    doc = {
        "format": "arrkit-basis",
        "version": 1,
        "ell": arrangement.ell,
        "arrangement": {
            "ell": arrangement.ell,
            "hyperplanes": [poly_to_str(f.poly()) for f in arrangement.forms],
            "mult": list(arrangement.mult),
        },
        "derivations": [theta.to_dict() for theta in basis],
        "exponents": list(exponents),
        "verdict": verdict.kind,
    }
    if extra:
        doc.update(extra)
    return doc


def write_basis_file(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_basis_file(path: str) -> tuple[list[Derivation], dict]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "arrkit-basis":
        raise UsageError(f"{path} is not a basis file")
    basis = [Derivation.from_dict(rec) for rec in doc["derivations"]]
    return basis, doc


def arrangement_from_document(doc: dict) -> MultiArrangement:
    ell = doc["ell"]
    forms = []
    for text in doc["hyperplanes"]:
        poly = parse_poly(text, ell)
        coeffs = [poly.coefficient(tuple(1 if j == i else 0 for j in range(ell)))
                  for i in range(ell)]
        forms.append(LinearForm(coeffs))
    return MultiArrangement(ell, tuple(forms), tuple(doc["mult"]))


def read_arrangement_file(path: str) -> MultiArrangement:
    with open(path, "r", encoding="utf-8") as fh:
        return arrangement_from_document(json.load(fh))


# -- cache --------------------------------------------------------------------

def cache_dir() -> str:
    return os.environ.get("ARRKIT_CACHE_DIR",
                          os.path.join(os.path.expanduser("~"), ".cache", "arrkit"))


def cache_lookup(arrangement: MultiArrangement) -> dict | None:
    path = os.path.join(cache_dir(), arrangement_hash(arrangement) + ".json")
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return None


def cache_store(arrangement: MultiArrangement, doc: dict) -> str:
    os.makedirs(cache_dir(), exist_ok=True)
    path = os.path.join(cache_dir(), arrangement_hash(arrangement) + ".json")
    if not os.path.exists(path):  # append-only
        write_basis_file(path, doc)
    return path


# -- shared argument handling ---------------------------------------------------

def _target_arrangement(args) -> tuple[MultiArrangement, dict]:
    if getattr(args, "arrangement", None):
        arr = read_arrangement_file(args.arrangement)
        return arr, {"arrangement_file": args.arrangement}
    if not args.group:
        raise UsageError("need a group name or --arrangement FILE")
    spec = GroupSpec.parse(args.group)
    arr = multi_arrangement(spec, args.m, args.shift)
    return arr, {"group": spec.name(), "m": args.m, "shift": args.shift}


def _emit(args, record: RunRecord, human_lines: list[str]) -> None:
    if args.json:
        print(record.dump())
    else:
        for line in human_lines:
            print(line)


# -- subcommands ----------------------------------------------------------------

def cmd_exponents(args) -> int:
    start = time.perf_counter()
    spec = GroupSpec.parse(args.group)
    predicted = predict_exponents(spec, args.m, args.shift)
    outputs = {"predicted": predicted}
    lines = [f"predicted exponents of ({spec.name()}, {args.m}*omega + {args.shift}): "
             f"{{{', '.join(map(str, predicted))}}}"]
    status = 0
    if args.oracle:
        from .oracle import OracleInconsistency

        arr = multi_arrangement(spec, args.m, args.shift)
        try:
            report = generator_degrees(arr, predicted=predicted)
            oracle_exps = sorted(report.degrees) if report.complete else None
        except OracleInconsistency:
            oracle_exps = None
        outputs["oracle"] = oracle_exps
        match = oracle_exps == predicted
        outputs["match"] = match
        lines.append(f"oracle exponents: "
                     f"{'{' + ', '.join(map(str, oracle_exps)) + '}' if oracle_exps else 'inconclusive'}")
        lines.append("MATCH" if match else "MISMATCH")
        status = 0 if match else 1
    record = RunRecord("exponents", {"group": spec.name(), "m": args.m, "shift": args.shift},
                       outputs, time.perf_counter() - start)
    _emit(args, record, lines)
    return status


def _resolve_flat_source(args, spec: GroupSpec | None) -> str | None:
    if args.flat:
        if os.path.exists(args.flat):
            return args.flat
        resolved = resolve_flat_config(args.flat)
        if resolved is None:
            raise UsageError(f"no flat config at path or shipped name {args.flat!r}")
        return resolved
    if spec is not None and spec.is_well_generated():
        return resolve_flat_config(spec)
    return None


def cmd_build(args) -> int:
    start = time.perf_counter()
    inputs: dict = {}
    extra: dict = {}
    if args.rank2:
        if args.r is None or args.mult is None:
            raise UsageError("--rank2 needs --r and --mult (and optionally --k, --parity)")
        if (args.m1 is None) != (args.m2 is None):
            raise UsageError("--m1 and --m2 must be given together")
        if args.m1 is not None:
            res = rank2_general(args.r, args.mult, args.m1, args.m2, args.parity)
        else:
            from .rank2 import even_rank2_basis, odd_rank2_basis
            builder = odd_rank2_basis if args.parity == "odd" else even_rank2_basis
            res = builder(args.r, args.mult, args.k)
        basis = sorted([res.theta1, res.theta2], key=lambda t: t.pdeg())
        arrangement = res.arrangement
        verdict, exponents = res.verdict, sorted(res.exponents)
        inputs = {"rank2": True, "r": args.r, "mult": args.mult, "k": args.k,
                  "parity": args.parity, "m1": args.m1, "m2": args.m2}
        extra = {"coefficient_vectors": {"a": res.a, "b": res.b}}
    elif args.general:
        if args.r is None or args.m_vec is None or args.mult is None:
            raise UsageError("--general needs --r, --m-vec and --mult")
        m_vec = [int(v) for v in args.m_vec.split(",")]
        built = build_basis_imprimitive(args.r, len(m_vec), m_vec, args.mult, args.parity)
        basis, arrangement = built.basis, built.arrangement
        verdict, exponents = built.verdict, built.exponents
        inputs = {"general": True, "r": args.r, "m_vec": m_vec, "mult": args.mult,
                  "parity": args.parity}
    else:
        if not args.group:
            raise UsageError("build needs a group, --rank2, or --general")
        spec = GroupSpec.parse(args.group)
        arrangement = multi_arrangement(spec, args.m, args.shift)
        inputs = {"group": spec.name(), "m": args.m, "shift": args.shift}
        cached = None if args.no_cache else cache_lookup(arrangement)
        if cached is not None:
            basis = [Derivation.from_dict(rec) for rec in cached["derivations"]]
            verdict = ziegler_check(basis, arrangement)
            exponents = cached["exponents"]
            extra = {"cache": "hit"}
        else:
            flat_source = _resolve_flat_source(args, spec)
            if flat_source is not None:
                fs = load_flat_structure(flat_source)
                mu = [args.shift] * fs.arrangement.size
                if args.shift == 0:
                    from .poly import MultiPoly
                    mu_basis = [Derivation([MultiPoly.const(spec.ell, 1) if c == i
                                            else MultiPoly.zero(spec.ell)
                                            for c in range(spec.ell)])
                                for i in range(spec.ell)]
                else:
                    mu_basis = extract_basis(multi_arrangement(spec, 0, 1)).basis
                basis, verdict, exponents = build_basis_wellgen(fs, mu_basis, mu, args.m)
                inputs["route"] = "flat"
            else:
                from .rank2 import build_basis_for_group
                built = build_basis_for_group(spec, args.m, args.shift)
                basis, verdict, exponents = built.basis, built.verdict, built.exponents
                inputs["route"] = "rank2" if spec.ell == 2 else "oracle"
    doc = basis_to_document(basis, arrangement, verdict, exponents, extra={
        **({"group": inputs.get("group")} if inputs.get("group") else {}),
        **extra,
    })
    out_path = args.out
    if out_path is None and inputs.get("group") and not args.no_cache:
        out_path = cache_store(arrangement, doc)
    elif out_path:
        write_basis_file(out_path, doc)
    outputs = {"exponents": list(exponents), "verdict": verdict.kind,
               "basis_file": out_path}
    record = RunRecord("build", inputs, outputs, time.perf_counter() - start)
    lines = [f"exponents: {{{', '.join(map(str, exponents))}}}",
             f"verdict: {verdict.kind}"]
    if out_path:
        lines.append(f"basis file: {out_path}")
    _emit(args, record, lines)
    return 0 if verdict.certified else 1


def cmd_verify(args) -> int:
    start = time.perf_counter()
    basis, doc = read_basis_file(args.basis)
    if getattr(args, "arrangement", None) or args.group:
        arrangement, inputs = _target_arrangement(args)
    else:
        arrangement = arrangement_from_document(doc["arrangement"])
        inputs = {"arrangement": "from basis file"}
    verdict = ziegler_check(basis, arrangement)
    q = arrangement.defining_polynomial()
    det_ok = verdict.certified
    outputs = {"verdict": verdict.kind, "detail": verdict.detail,
               "q_degree": q.degree() if not q.is_zero() else 0}
    record = RunRecord("verify", {"basis": args.basis, **inputs}, outputs,
                       time.perf_counter() - start)
    lines = [f"verdict: {verdict.kind}" + (f" ({verdict.detail})" if verdict.detail else ""),
             f"determinant matches Q(A,nu): {'yes' if det_ok else 'no'}"]
    _emit(args, record, lines)
    return 0 if verdict.certified else 1


def cmd_oracle(args) -> int:
    start = time.perf_counter()
    arrangement, inputs = _target_arrangement(args)
    predicted = None
    if args.group:
        predicted = predict_exponents(GroupSpec.parse(args.group), args.m, args.shift)
    report = oracle_report(arrangement, bound=args.bound, predicted=predicted)
    record = RunRecord("oracle", inputs, report, time.perf_counter() - start)
    lines = [f"generator degrees: {report['generator_degrees']}",
             f"verdict: {report['verdict']}",
             "degree profile: " + ", ".join(f"{p}:{d}" for p, d in report["degree_profile"].items())]
    _emit(args, record, lines)
    return 0 if report["verdict"] == "certified-basis" else 1


def cmd_triple(args) -> int:
    start = time.perf_counter()
    arrangement, inputs = _target_arrangement(args)
    result = triple(arrangement, args.h0)
    outputs = {
        "deletion": {
            "hyperplanes": [poly_to_str(f.poly()) for f in result.deletion.forms],
            "mult": list(result.deletion.mult),
        },
        "restriction": {
            "hyperplanes": [poly_to_str(f.poly()) for f in result.restriction.forms],
            "mult": list(result.restriction.mult),
        },
        "chosen_hyperplane": args.h0,
    }
    record = RunRecord("triple", {**inputs, "h0": args.h0}, outputs,
                       time.perf_counter() - start)
    lines = ["deletion: " + ", ".join(
        f"({poly_to_str(f.poly())})^{m}" for f, m in zip(result.deletion.forms, result.deletion.mult)),
        "restriction: " + ", ".join(
        f"({poly_to_str(f.poly())})^{m}" for f, m in zip(result.restriction.forms, result.restriction.mult))]
    _emit(args, record, lines)
    return 0


def cmd_acceptance(args) -> int:
    start = time.perf_counter()
    results = run_all(quick=args.quick, jobs=args.jobs)
    outputs = {f"criterion_{r.ident}": {"passed": r.passed, "checks": r.cases,
                                        "failures": r.failures, "seconds": round(r.seconds, 2)}
               for r in results}
    record = RunRecord("acceptance", {"quick": args.quick}, outputs,
                       time.perf_counter() - start)
    lines = [r.line() for r in results]
    for r in results:
        for failure in r.failures:
            lines.append(f"    {failure}")
    ok = all(r.passed for r in results)
    lines.append("ACCEPTANCE: " + ("all criteria passed" if ok else "FAILURES PRESENT"))
    _emit(args, record, lines)
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arrkit",
        description="Exact certified bases of derivation modules of reflection multi-arrangements.")
    parser.add_argument("--version", action="version", version=f"arrkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, group_positional=True):
        if group_positional:
            p.add_argument("group", nargs="?", help="group name, e.g. G(3,1,2)")
        p.add_argument("--m", type=int, default=0, help="multiplicity scale m")
        p.add_argument("--shift", type=int, choices=(0, 1), default=0,
                       help="0 for m*omega, 1 for m*omega + 1")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("exponents", help="predicted exponents, optionally vs the oracle")
    add_common(p)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("build", help="construct and certify a basis")
    add_common(p)
    p.add_argument("--flat", help="flat config path or shipped name (well-generated route)")
    p.add_argument("--rank2", action="store_true", help="closed-form rank-2 builder")
    p.add_argument("--general", action="store_true", help="general multiplicity builder")
    p.add_argument("--r", type=int, help="root-of-unity order r")
    p.add_argument("--mult", type=int, help="binomial-factor half multiplicity m")
    p.add_argument("--k", type=int, default=0, help="coordinate ladder level k")
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--m1", type=int, help="coordinate multiplicity of x1 (rank-2)")
    p.add_argument("--m2", type=int, help="coordinate multiplicity of x2 (rank-2)")
    p.add_argument("--m-vec", help="comma-separated coordinate multiplicities")
    p.add_argument("--out", help="basis file path")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="re-certify a basis file")
    p.add_argument("basis", help="basis file path")
    add_common(p)
    p.add_argument("--arrangement", help="arrangement JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force degree profile and extraction")
    add_common(p)
    p.add_argument("--arrangement", help="arrangement JSON file")
    p.add_argument("--bound", type=int, help="degree bound override")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("triple", help="deletion and Euler restriction")
    add_common(p)
    p.add_argument("--arrangement", help="arrangement JSON file")
    p.add_argument("--h0", type=int, required=True, help="distinguished hyperplane index")
    p.set_defaults(func=cmd_triple)

    p = sub.add_parser("acceptance", help="run the acceptance grid")
    p.add_argument("--quick", action="store_true", help="reduced grid, finishes in about a minute")
    p.add_argument("--jobs", type=int, default=max(1, min(4, os.cpu_count() or 1)),
                   help="worker processes for grid cells")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_acceptance)
    return parser


def main(argv=None) -> int:
    from .oracle import ExtractionFailure, OracleInconsistency

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OracleInconsistency, ExtractionFailure) as exc:
        print(f"verdict failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
