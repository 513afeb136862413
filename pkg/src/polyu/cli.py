"""Command-line interface: ``polyu <command> ...``.

Settings are resolved as flags > ``POLYU_*`` environment variables > JSON
config file > defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import forms
from .escalation import MAX_ARITY, ROOT, ROOT_REPORT, classify, escalate, full_catalogue
from .forms import TernaryForm
from .polysum import (
    IndeterminateError,
    MixedSum,
    criterion_universal,
    exceptional_set,
    find_witness,
    truant,
)
from .verify import ALL_TABLES, Verifier

EXPECTED_COUNTS = {3: 6, 4: 547, 5: 707, 6: 11}
FORMATS = ("text", "json", "csv")
ENV_PREFIX = "POLYU_"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    bound: int = 100_000
    threads: int | str = "auto"
    output_format: str = "text"
    output_path: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.bound, int) or self.bound < 61:
            raise UsageError(f"bound must be an integer >= 61, got {self.bound!r}")
        if self.threads != "auto" and (not isinstance(self.threads, int) or self.threads < 1):
            raise UsageError(f"threads must be a positive integer or 'auto', got {self.threads!r}")
        if self.output_format not in FORMATS:
            raise UsageError(f"output format must be one of {', '.join(FORMATS)}")


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key == "bound":
        return int(value)
    if key == "threads":
        return "auto" if str(value) == "auto" else int(value)
    return str(value)


def resolve_config(flags: Mapping[str, Any], env: Mapping[str, str] | None = None,
                   config_file: str | None = None) -> RunConfig:
    """Merge the configuration layers; later layers override earlier ones."""
    env = os.environ if env is None else env
    keys = ("bound", "threads", "output_format", "output_path")
    merged: dict[str, Any] = {}
    path = config_file or env.get(ENV_PREFIX + "CONFIG")
    if path:
        data = json.loads(Path(path).read_text())
        unknown = set(data) - set(keys)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(data)
    for k in keys:
        if ENV_PREFIX + k.upper() in env:
            merged[k] = env[ENV_PREFIX + k.upper()]
    merged.update({k: v for k, v in flags.items() if k in keys and v is not None})
    try:
        return RunConfig(**{k: _coerce(k, v) for k, v in merged.items()})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# --------------------------------------------------------------------------
# output


def _csv(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                         for k, v in row.items()})
    return buf.getvalue()


def emit(cfg: RunConfig, text: str, payload: Any, rows: Sequence[Mapping] | None = None) -> None:
    if cfg.output_format == "json":
        out = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    elif cfg.output_format == "csv":
        out = _csv(rows if rows is not None else [payload])
    else:
        out = text if text.endswith("\n") else text + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(out)
    else:
        sys.stdout.write(out)


def _sum(text: str) -> MixedSum:
    try:
        return MixedSum.parse(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse sum {text!r}: {exc}") from exc


def _form(text: str) -> TernaryForm:
    try:
        return TernaryForm.parse(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse form {text!r}: {exc}") from exc


def _matrix(text: str) -> tuple[tuple[int, ...], ...]:
    try:
        rows = tuple(tuple(int(x) for x in r.split(",")) for r in text.split(";"))
    except ValueError as exc:
        raise UsageError(f"cannot parse matrix {text!r}") from exc
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise UsageError("matrix must be 3x3, rows separated by ';'")
    return rows


# --------------------------------------------------------------------------
# sum commands


def cmd_check(args: argparse.Namespace, cfg: RunConfig) -> int:
    phi = _sum(args.sum)
    w = find_witness(phi, args.n)
    payload: dict[str, Any] = {**phi.to_json(), "notation": phi.notation, "n": args.n,
                               "represented": w is not None}
    if w is None:
        text = f"{phi} does not represent {args.n}: not represented"
    else:
        payload["witness"] = {"x": list(w[0]), "y": list(w[1])}
        text = f"{phi} represents {args.n}: represented x={list(w[0])} y={list(w[1])}"
    emit(cfg, text, payload)
    return 0


def cmd_truant(args: argparse.Namespace, cfg: RunConfig) -> int:
    phi = _sum(args.sum)
    rep = truant(phi, cfg.bound)
    text = (f"t({phi}) = {rep.truant}" if rep.truant is not None
            else f"{phi}: {rep.verdict.value} up to {cfg.bound}")
    emit(cfg, text, {"notation": phi.notation, **rep.to_json()})
    return 0 if rep.verdict.value != "Indeterminate" else 1


def cmd_universal(args: argparse.Namespace, cfg: RunConfig) -> int:
    phi = _sum(args.sum)
    crit = criterion_universal(phi)
    rep = truant(phi, cfg.bound)
    agree = crit == rep.universal and rep.verdict.value != "Indeterminate"
    text = f"{phi}: {'universal' if crit else 'not universal'}"
    if rep.truant is not None:
        text += f" (truant {rep.truant})"
    if not agree:
        text += f"; WARNING: criterion and scan to {cfg.bound} disagree"
    emit(cfg, text, {"notation": phi.notation, "criterion": crit, **rep.to_json()})
    return 0 if crit and agree else 1


def cmd_exceptional(args: argparse.Namespace, cfg: RunConfig) -> int:
    phi = _sum(args.sum)
    E = exceptional_set(phi, cfg.bound)
    emit(cfg, f"E({phi}) up to {cfg.bound}: {{{', '.join(map(str, E))}}}",
         {"notation": phi.notation, "bound": cfg.bound, "exceptional": E},
         [{"n": n} for n in E])
    return 0


def _runs_to(arity: int, cfg: RunConfig):
    """Escalate and classify up to ``arity``; returns the classification runs."""
    runs = []
    frontier = {ROOT: ROOT_REPORT}
    for k in range(1, arity + 1):
        cands = escalate(frontier)
        run = classify(cands, cfg.bound, workers=cfg.threads, parents=cands)
        runs.append(run)
        frontier = run.nonuniversal_reports()
        if not frontier and k < arity:
            break
    return runs


def cmd_escalate(args: argparse.Namespace, cfg: RunConfig) -> int:
    if not 1 <= args.arity <= MAX_ARITY:
        raise UsageError(f"arity must be between 1 and {MAX_ARITY}")
    run = _runs_to(args.arity, cfg)[-1]
    lines = [f"{r['notation']}  {r['verdict']}" + (f" t={r['truant']}" if r["truant"] != "" else "")
             for r in run.rows()]
    lines.append(f"arity {run.arity}: {len(run.candidates)} candidates, "
                 f"{len(run.proper_universal)} proper universal")
    if cfg.output_format == "csv":
        out = run.to_csv()
        if cfg.output_path:
            Path(cfg.output_path).write_text(out)
        else:
            sys.stdout.write(out)
    else:
        emit(cfg, "\n".join(lines), run.to_json())
    return 0


def _write_run(directory: Path, run) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"arity{run.arity}.csv").write_text(run.to_csv())
    (directory / f"arity{run.arity}.json").write_text(
        json.dumps(run.to_json(), indent=1, sort_keys=True) + "\n")


def cmd_catalogue(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.arity is not None:
        if args.arity not in EXPECTED_COUNTS:
            raise UsageError(f"arity must be one of {sorted(EXPECTED_COUNTS)}")
        runs = _runs_to(args.arity, cfg)[args.arity - 1:]
    else:
        runs = full_catalogue(cfg.bound, workers=cfg.threads).runs
    counts = {r.arity: len(r.proper_universal) for r in runs}
    expected = {k: EXPECTED_COUNTS.get(k, 0) for k in counts}
    if args.arity is None:
        expected = {**{k: 0 for k in counts}, **EXPECTED_COUNTS}
    diff = {k: (expected.get(k, 0), counts.get(k, 0)) for k in sorted(set(expected) | set(counts))
            if expected.get(k, 0) != counts.get(k, 0)}
    if cfg.output_path:
        for run in runs:
            _write_run(Path(cfg.output_path), run)
    parts = [f"{k}:{v}" for k, v in counts.items() if v]
    summary = " ".join(parts + [f"total:{sum(counts.values())}"])
    if args.arity is not None:
        lines = [phi.notation for phi in sorted(runs[0].proper_universal)] + [summary]
    else:
        lines = [summary]
    for k, (want, got) in diff.items():
        lines.append(f"MISMATCH arity {k}: expected {want}, got {got}")
    if cfg.output_format == "text" or cfg.output_path:
        sys.stdout.write("\n".join(lines) + "\n")
    elif cfg.output_format == "json":
        sys.stdout.write(json.dumps({"bound": cfg.bound, "counts": {str(k): v for k, v in counts.items()},
                                     "total": sum(counts.values()),
                                     "mismatches": {str(k): {"expected": w, "actual": g}
                                                    for k, (w, g) in diff.items()},
                                     "proper_universal": [phi.notation for r in runs
                                                          for phi in sorted(r.proper_universal)]},
                                    indent=1, sort_keys=True) + "\n")
    else:
        for run in runs:
            sys.stdout.write(run.to_csv())
    return 1 if diff else 0


# --------------------------------------------------------------------------
# forms


def cmd_forms(args: argparse.Namespace, cfg: RunConfig) -> int:
    op = args.op
    if op == "count":
        f = _form(args.f)
        r = forms.rep_count(args.n, f)
        emit(cfg, f"r({args.n}, {f}) = {r}", {"form": f.to_json(), "n": args.n, "count": r})
        return 0
    if op == "represented":
        f = _form(args.f)
        have = set(forms.represented_set(f, cfg.bound))
        missing = [n for n in range(cfg.bound + 1) if n not in have]
        emit(cfg, f"{f} misses {len(missing)} integers up to {cfg.bound}: "
                  + ", ".join(map(str, missing[:50])) + (" ..." if len(missing) > 50 else ""),
             {"form": f.to_json(), "bound": cfg.bound, "missing": missing},
             [{"n": n} for n in missing])
        return 0
    if op == "classes":
        g = _form(args.g)
        R = sorted(forms.congruence_classes(g, args.d, args.a))
        emit(cfg, f"|R({g}, {args.d}, {args.a})| = {len(R)}\n" + "\n".join(map(str, R)),
             {"g": g.to_json(), "d": args.d, "a": args.a, "R": [list(v) for v in R]},
             [{"v": list(v)} for v in R])
        return 0
    if op == "transforms":
        f, g = _form(args.f), _form(args.g)
        Ts = forms.transformation_set(f, g, args.d)
        emit(cfg, f"{len(Ts)} transformations\n" + "\n".join(
                 ";".join(",".join(map(str, r)) for r in T) for T in Ts),
             {"f": f.to_json(), "g": g.to_json(), "d": args.d,
              "transformations": [[list(r) for r in T] for T in Ts]},
             [{"T": [list(r) for r in T]} for T in Ts])
        return 0
    if op in ("bad", "prec"):
        f, g = _form(args.f), _form(args.g)
        cert = forms.good_partition(f, g, args.d, args.a)
        bad = cert.bad_signed()
        if op == "bad":
            text = f"B = {{{', '.join(map(str, bad))}}}" if bad else "B = {}"
            emit(cfg, f"|R| = {len(cert.R)}, good {len(cert.good)}\n{text}", cert.to_json())
            return 0
        ok = not bad
        missed: list[int] = []
        if ok and args.verify:
            missed = forms.progression_counterexamples(f, g, args.d, args.a, cfg.bound)
        emit(cfg, f"{g} <_{args.d},{args.a} {f}: {'holds' if ok else 'fails'}"
                  + (f"; counterexamples {missed[:10]}" if missed else ""),
             {**cert.to_json(), "holds": ok, "counterexamples": missed})
        return 0 if ok and not missed else 1
    if op == "pme":
        f, g = _form(args.f), _form(args.g)
        res = forms.pme_check(f, g, args.d, args.a, _matrix(args.T))
        text = ("pme_check passes" if res else "pme_check fails: " + "; ".join(res.failures()))
        text += "\neigenvectors: " + ", ".join(map(str, res.eigenvectors))
        emit(cfg, text, {"passed": res.verdict, "failures": res.failures(),
                         "bad": [list(v) for v in sorted(res.bad)],
                         "eigenvectors": [list(v) for v in res.eigenvectors]})
        return 0 if res else 1
    if op == "siegel":
        bound = min(cfg.bound, args.limit)
        fails = forms.siegel_identity_failures(bound)
        emit(cfg, f"weighted genus identity up to {bound}: "
                  + ("holds" if not fails else f"fails at {fails[:10]}"),
             {"bound": bound, "failures": fails})
        return 0 if not fails else 1
    raise UsageError(f"unknown forms operation {op}")


def cmd_verify_tables(args: argparse.Namespace, cfg: RunConfig) -> int:
    tables = args.table or list(ALL_TABLES)
    for t in tables:
        if t not in ALL_TABLES:
            raise UsageError(f"unknown table {t!r}; known: {', '.join(ALL_TABLES)}")
    checks = Verifier(bound=cfg.bound, workers=cfg.threads).run(tables)
    failed = [c for c in checks if not c.passed]
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    emit(cfg, "\n".join(lines), {"bound": cfg.bound, "passed": not failed,
                                 "checks": [c.to_json() for c in checks]},
         [c.to_json() for c in checks])
    return 1 if failed else 0


# --------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--bound", type=int, help="scan bound (>= 61, default 100000)")
    p.add_argument("--threads", help="worker processes or 'auto'")
    p.add_argument("--format", dest="output_format", choices=FORMATS)
    p.add_argument("--output", dest="output_path",
                   help="output file (a directory for catalogue)")
    p.add_argument("--config", help="JSON config file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="polyu", parents=[common],
                                     description="Universal mixed sums of squares and octagonal numbers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("check", cmd_check, "decide whether a sum represents n")
    p.add_argument("sum", help="notation such as '1,2|5,5'")
    p.add_argument("n", type=int)
    add("truant", cmd_truant, "least positive integer not represented").add_argument("sum")
    add("universal", cmd_universal, "universality via the 19 critical integers").add_argument("sum")
    add("exceptional", cmd_exceptional, "integers up to the bound not represented").add_argument("sum")
    add("escalate", cmd_escalate, "candidates of one arity").add_argument("--arity", type=int, required=True)
    add("catalogue", cmd_catalogue, "all proper universal sums").add_argument("--arity", type=int)

    fp = add("forms", cmd_forms, "ternary quadratic form tools")
    fsub = fp.add_subparsers(dest="op", required=True)
    form_help = "'diag:a,b,c' or 'gram:r1;r2;r3'"

    def fop(name: str, help: str, *fields: str) -> argparse.ArgumentParser:
        q = fsub.add_parser(name, parents=[common], help=help)
        for fld in fields:
            if fld in ("f", "g"):
                q.add_argument(fld, help=form_help)
            else:
                q.add_argument(fld, type=int)
        return q

    fop("count", "representation count r(n, f)", "f", "n")
    fop("represented", "integers up to the bound missed by f", "f")
    fop("classes", "residue vectors v with g(v) = a mod d", "g", "d", "a")
    fop("transforms", "integer T with T^t M_f T = d^2 M_g", "f", "g", "d")
    fop("bad", "residues of R(g, d, a) no transformation carries to Z^3", "f", "g", "d", "a")
    fop("prec", "whether every residue of R(g, d, a) is good", "f", "g", "d", "a").add_argument(
        "--verify", action="store_true", help="also compare represented sets up to the bound")
    fop("pme", "infinite-order witness conditions", "f", "g", "d", "a").add_argument(
        "T", help="3x3 matrix 'a,b,c;d,e,f;g,h,i'")
    fop("siegel", "weighted genus identity for <1,27,27>").add_argument(
        "--limit", type=int, default=10_000, help="cap on the bound (default 10000)")

    add("verify-tables", cmd_verify_tables, "recompute every embedded fixture").add_argument(
        "--table", action="append", help=f"one of {', '.join(ALL_TABLES)} (repeatable)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(vars(args), config_file=getattr(args, "config", None))
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"polyu: error: {exc}", file=sys.stderr)
        return 2
    except IndeterminateError as exc:
        print(f"polyu: indeterminate: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
