"""Command-line front end: build, verify, cross-check and export fusion tables.

Exit codes: 0 success, 1 usage/configuration/I-O error, 2 verification or
numerical-tolerance failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import closed_form, fusion_ring, graphs, matrix_model, polynomials
from .config import DEFAULT_TOLERANCES, Tolerances, max_k
from .errors import FusionKError, TableFormatError

log = logging.getLogger("fusionk")

EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 1, 2
COMMANDS = ("build", "verify", "crosscheck", "graph", "identities")
FORMATS = ("json", "csv", "pretty", "dot")
EXTENSIONS = {"json": "json", "csv": "csv", "pretty": "txt", "dot": "dot"}

TABLE_CHECKS = tuple(fusion_ring.VERIFIERS)
MODEL_CHECKS = ("orthonormality", "xi", "chain")
POLY_CHECKS = ("charpoly", "key_identity", "remark", "beta3_power", "case2")
ALL_CHECKS = TABLE_CHECKS + MODEL_CHECKS + POLY_CHECKS
IDENTITY_CHECKS = ("charpoly", "key_identity", "remark", "case2", "parity", "g2g")


class ConfigError(FusionKError):
    """Bad flags, out-of-range k, or unusable paths."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    ks: tuple[int, ...]
    fmt: str = "json"
    out: Optional[Path] = None
    checks: tuple[str, ...] = ()
    tolerances: Tolerances = DEFAULT_TOLERANCES
    allow_large: bool = False
    source: Optional[Path] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        try:
            limit = max_k()
        except ValueError as e:
            raise ConfigError(str(e)) from None
        for k in self.ks:
            if k < 0:
                raise ConfigError(f"k must be non-negative, got {k}")
            if k > limit and not self.allow_large:
                raise ConfigError(f"k={k} is above the supported maximum {limit}; "
                                  f"pass --allow-large or set FUSIONK_MAX_K")


# ----------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def parse_k(text: str) -> tuple[int, ...]:
    """'n' or 'a..b' (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"--k expects n or a..b, got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"empty k range {text!r}")
    return tuple(range(lo, hi + 1))


def parse_tolerances(items: Sequence[str]) -> Tolerances:
    names = {f.name for f in fields(Tolerances)}
    updates = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name not in names:
            raise ConfigError(f"--tolerance expects NAME=VALUE with NAME in {sorted(names)}, got {item!r}")
        try:
            v = float(value)
        except ValueError:
            raise ConfigError(f"tolerance {name} must be a number, got {value!r}") from None
        if not v > 0:
            raise ConfigError(f"tolerance {name} must be positive")
        updates[name] = v
    return replace(DEFAULT_TOLERANCES, **updates)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fusionk", description="Fusion tables for the Gamma_k graph family.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, k_required=True):
        sp.add_argument("--k", required=k_required, help="n or a..b (inclusive)")
        sp.add_argument("--allow-large", action="store_true", help="permit k above the supported maximum")
        sp.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                        help="override a numerical tolerance (repeatable)")
        sp.add_argument("--out", type=Path, help="output file, directory, or pattern containing {k}")

    b = sub.add_parser("build", help="build fusion tables from the matrix model")
    common(b)
    b.add_argument("--format", default="json", choices=("json", "csv", "pretty"))

    v = sub.add_parser("verify", help="run the verifier battery")
    common(v, k_required=False)
    v.add_argument("--checks", help=f"comma-separated subset of {','.join(ALL_CHECKS)}")
    v.add_argument("--from", dest="source", type=Path, help="verify a serialized table instead")

    c = sub.add_parser("crosscheck", help="compare the model table with the closed forms")
    common(c, k_required=False)
    c.add_argument("--from", dest="source", type=Path, help="cross-check a serialized table instead")

    g = sub.add_parser("graph", help="emit the principal graphs")
    common(g)
    g.add_argument("--emit", default="dot", choices=("dot",))

    i = sub.add_parser("identities", help="exact polynomial and sequence identities")
    common(i)
    i.add_argument("--checks", help=f"comma-separated subset of {','.join(IDENTITY_CHECKS)}")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    source = getattr(ns, "source", None)
    if ns.k is None and source is None:
        raise ConfigError(f"{ns.command} needs --k or --from")
    ks = parse_k(ns.k) if ns.k is not None else ()
    allowed = IDENTITY_CHECKS if ns.command == "identities" else ALL_CHECKS
    raw_checks = getattr(ns, "checks", None)
    if raw_checks:
        checks = tuple(c.strip() for c in raw_checks.split(",") if c.strip())
        unknown = [c for c in checks if c not in allowed]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; choose from {','.join(allowed)}")
    else:
        checks = allowed
    fmt = getattr(ns, "format", None) or ("dot" if ns.command == "graph" else "json")
    return RunConfig(ns.command, ks, fmt, ns.out, checks, parse_tolerances(ns.tolerance),
                     ns.allow_large, source)


# ----------------------------------------------------------------------------
# output


def _targets(cfg: RunConfig) -> Callable[[int], Optional[Path]]:
    """Map k to an output path (None = stdout)."""
    out = cfg.out
    if out is None:
        if len(cfg.ks) > 1 and cfg.fmt == "json":
            raise ConfigError("several JSON tables need --out DIR or a pattern containing {k}")
        return lambda k: None
    if "{k}" in str(out):
        return lambda k: Path(str(out).format(k=k))
    if out.is_dir():
        return lambda k: out / f"fusion_k{k}.{EXTENSIONS[cfg.fmt]}"
    if len(cfg.ks) > 1 and cfg.fmt == "json":
        raise ConfigError("several JSON tables need --out DIR or a pattern containing {k}")
    return lambda k: out


class _Sink:
    """Collects text per destination so every file is written exactly once."""

    def __init__(self):
        self.chunks: dict[Optional[Path], list[str]] = {}

    def add(self, path: Optional[Path], text: str):
        self.chunks.setdefault(path, []).append(text)

    def flush(self):
        for path, parts in self.chunks.items():
            text = "".join(parts)
            if path is None:
                sys.stdout.write(text)
                continue
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_bytes(text.encode("utf-8"))
            except OSError as e:
                raise ConfigError(f"cannot write {path}: {e}") from None
            log.info("wrote %s", path)


def render(table: fusion_ring.FusionTable, fmt: str, header: bool = True) -> str:
    if fmt == "json":
        return fusion_ring.serialize(table).decode("ascii")
    if fmt == "csv":
        text = fusion_ring.to_csv(table)
        return text if header else text.split("\n", 1)[1]
    if fmt == "pretty":
        return fusion_ring.to_pretty(table)
    raise ConfigError(f"format {fmt!r} does not apply to tables")


# ----------------------------------------------------------------------------
# commands


def _model_and_table(k: int, tol: Tolerances):
    model = matrix_model.build_model(k, tol=tol)
    return model, matrix_model.fusion_table(model, tol.rounding)


def _load(path: Path) -> fusion_ring.FusionTable:
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None
    return fusion_ring.deserialize(data)


def cmd_build(cfg: RunConfig) -> int:
    target = _targets(cfg)
    sink = _Sink()
    for k in cfg.ks:
        _, table = _model_and_table(k, cfg.tolerances)
        path = target(k)
        sink.add(path, render(table, cfg.fmt, header=path not in sink.chunks))
    sink.flush()
    return EXIT_OK


def _poly_check(name: str, k: int, table) -> fusion_ring.CheckResult:
    CR = fusion_ring.CheckResult
    if name == "charpoly":
        return CR(graphs.char_poly_check(k))
    if name == "key_identity":
        return CR(polynomials.key_identity(k))
    if name == "remark":
        a, b = polynomials.remark_identities(k)
        return CR(a and b, "" if a and b else f"identities hold: {a}, {b}")
    if name == "beta3_power":
        ok, detail = closed_form.beta3_power_check(table)
        return CR(ok, detail)
    if name == "case2":
        try:
            return CR(True, value=float(closed_form.case2_obstruction(k)))
        except ArithmeticError as e:
            return CR(False, str(e))
    if name == "parity":
        return CR(closed_form.parity_facts(k))
    if name == "g2g":
        return CR(closed_form.g2g_consistency(k))
    raise ConfigError(f"unknown check {name!r}")


def _model_check(name: str, model, tol: Tolerances) -> fusion_ring.CheckResult:
    if name == "orthonormality":
        return matrix_model.orthonormality_check(model, tol.orthonormality)
    if name == "xi":
        return matrix_model.xi_identities(model, tol.orthonormality)
    if name == "chain":
        return matrix_model.chain_inner_products(model, tol.orthonormality)
    raise ConfigError(f"unknown check {name!r}")


def _matrix_report(rows: list[tuple[int, dict[str, fusion_ring.CheckResult]]]) -> tuple[str, bool]:
    names = list(rows[0][1]) if rows else []
    widths = [max(len(n), 4) for n in names]
    lines = ["k".rjust(3) + "  " + " ".join(n.rjust(w) for n, w in zip(names, widths))]
    details, ok = [], True
    for k, res in rows:
        cells = []
        for n, w in zip(names, widths):
            r = res[n]
            cells.append(("skip" if r is None else "pass" if r.ok else "FAIL").rjust(w))
            if r is not None and not r.ok:
                ok = False
                details.append(f"k={k} {n}: {r.detail or 'failed'}")
        lines.append(str(k).rjust(3) + "  " + " ".join(cells))
    return "\n".join(lines + details) + "\n", ok


def cmd_verify(cfg: RunConfig) -> int:
    rows = []
    if cfg.source is not None:
        table = _load(cfg.source)
        if cfg.ks and cfg.ks != (table.k,):
            raise ConfigError(f"--k {cfg.ks} does not match the table's k={table.k}")
        jobs = [(table.k, None, table)]
    else:
        jobs = [(k, None, None) for k in cfg.ks]
    for k, model, table in jobs:
        if table is None:
            model, table = _model_and_table(k, cfg.tolerances)
        table_checks = [c for c in cfg.checks if c in TABLE_CHECKS]
        res = dict(fusion_ring.verify_all(table, table_checks, cfg.tolerances))
        for c in cfg.checks:
            if c in MODEL_CHECKS:
                res[c] = None if model is None else _model_check(c, model, cfg.tolerances)
            elif c in POLY_CHECKS:
                res[c] = _poly_check(c, k, table)
        rows.append((k, {c: res[c] for c in cfg.checks}))
        log.info("k=%d verified", k)
    text, ok = _matrix_report(rows)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_crosscheck(cfg: RunConfig) -> int:
    if cfg.source is not None:
        tables = [_load(cfg.source)]
    else:
        tables = [_model_and_table(k, cfg.tolerances)[1] for k in cfg.ks]
    ok = True
    for table in tables:
        rep = fusion_ring.crosscheck(table)
        sys.stdout.write("\n".join(rep.lines()) + "\n")
        for msg in rep.failures():
            sys.stdout.write(f"k={table.k} {msg}\n")
        ok = ok and rep.ok
    return EXIT_OK if ok else EXIT_FAILED


def cmd_graph(cfg: RunConfig) -> int:
    target = _targets(replace(cfg, fmt="dot"))
    sink = _Sink()
    for k in cfg.ks:
        sink.add(target(k), graphs.build_gamma(k).to_dot() + graphs.build_gamma_prime(k).to_dot())
    sink.flush()
    return EXIT_OK


def cmd_identities(cfg: RunConfig) -> int:
    rows = [(k, {c: _poly_check(c, k, None) for c in cfg.checks}) for k in cfg.ks]
    text, ok = _matrix_report(rows)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


HANDLERS = {"build": cmd_build, "verify": cmd_verify, "crosscheck": cmd_crosscheck,
            "graph": cmd_graph, "identities": cmd_identities}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s", stream=sys.stderr)
        cfg = config_from_args(ns)
        return HANDLERS[cfg.command](cfg)
    except ConfigError as e:
        print(f"fusionk: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except TableFormatError as e:
        print(f"fusionk: invalid table: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (FusionKError, ArithmeticError) as e:
        print(f"fusionk: failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
