"""Command-line front end.

Config files hold whitespace-separated ``key=value`` tokens; ``#`` starts a
comment.  ``ideal`` takes a JSON list of element expressions.  Command-line
flags override values read from a file.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

from .cr_universal import btype_key, build_universal_cr, type_blocks
from .errors import ConfigError, IdealError, ResourceLimitError
from .free_lie import DEFAULT_BASIS_CAP, hall_basis
from .prolongation import DEFAULT_MAX_LEVEL, ProlongationResult, format_map, prolong_until_zero
from .symbol import check_fundamental, real_form, make_symbol
from .syntax import ParseError, parse_element
from .verify import VerificationReport, verify_main_theorem

COMMANDS = ("hall", "universal", "symbol", "prolong", "verify")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass
class RunConfig:
    command: str = "verify"
    n: int = 1
    mu: int = 2
    ideal: list[str] = field(default_factory=list)
    max_level: int = DEFAULT_MAX_LEVEL
    basis_cap: int = DEFAULT_BASIS_CAP
    emit_bases: bool = False
    output: str = "-"
    generators: int = 2
    depth: int = 3

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if self.command == "hall":
            if self.generators < 1:
                raise ConfigError("generators out of range")
            if self.depth < 1:
                raise ConfigError("depth out of range")
            return self
        if self.n < 1:
            raise ConfigError("n out of range")
        if self.mu < 2:
            raise ConfigError("mu out of range")
        if self.max_level < 0:
            raise ConfigError("max_level out of range")
        if self.basis_cap < 1:
            raise ConfigError("basis_cap out of range")
        for k, expr in enumerate(self.ideal):
            try:
                parse_element(expr)
            except ParseError as e:
                raise ConfigError(f"ideal[{k}]: {e}") from e
        return self


_INT_KEYS = {"n", "mu", "max_level", "basis_cap", "generators", "depth"}
_KEYS = {f.name for f in fields(RunConfig)}
_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _strip_comments(text: str) -> str:
    out = []
    for line in text.splitlines():
        quoted = False
        for k, ch in enumerate(line):
            if ch == '"':
                quoted = not quoted
            elif ch == "#" and not quoted:
                line = line[:k] + " " * (len(line) - k)
                break
        out.append(line)
    return "\n".join(out)


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse ``key=value`` tokens into a validated RunConfig.

    Diagnostics name the key and the character offset of the problem.
    """
    src = _strip_comments(text)
    values = {}
    pos, end = 0, len(src)
    dec = json.JSONDecoder()
    while True:
        while pos < end and src[pos].isspace():
            pos += 1
        if pos >= end:
            break
        eq = src.find("=", pos)
        stop = pos
        while stop < end and not src[stop].isspace():
            stop += 1
        if eq < 0 or eq > stop:
            raise ConfigError(f"expected key=value at position {pos}")
        key = src[pos:eq].strip()
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r} at position {pos}")
        vpos = eq + 1
        if key == "ideal":
            try:
                val, stop = dec.raw_decode(src, vpos)
            except json.JSONDecodeError as e:
                raise ConfigError(f"ideal: malformed list at position {e.pos}") from e
            if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
                raise ConfigError(f"ideal: expected a list of strings at position {vpos}")
            for k, expr in enumerate(val):
                try:
                    parse_element(expr)
                except ParseError as e:
                    raise ConfigError(f"ideal[{k}]: {e.message} at position {e.pos} "
                                      f"in {expr!r}") from e
        else:
            stop = vpos
            while stop < end and not src[stop].isspace():
                stop += 1
            raw = src[vpos:stop]
            if key in _INT_KEYS:
                try:
                    val = int(raw)
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer at position {vpos}") from None
            elif key == "emit_bases":
                if raw.lower() not in _BOOL:
                    raise ConfigError(f"emit_bases: expected true/false at position {vpos}")
                val = _BOOL[raw.lower()]
            else:
                val = raw
        if key in values:
            raise ConfigError(f"duplicate key {key!r} at position {pos}")
        values[key] = val
        pos = stop
    return replace(base or RunConfig(), **values).validate()


def format_config(cfg: RunConfig) -> str:
    """Config echo that ``parse_config`` reads back to an equal RunConfig."""
    parts = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if f.name == "ideal":
            parts.append("ideal=" + json.dumps(v))
        elif isinstance(v, bool):
            parts.append(f"{f.name}={'true' if v else 'false'}")
        else:
            parts.append(f"{f.name}={v}")
    return " ".join(parts)


# -- runs ----------------------------------------------------------------------

def run_hall(cfg: RunConfig) -> dict:
    free = hall_basis(cfg.generators, cfg.depth, cfg.basis_cap)
    return {"kind": "hall", "generators": cfg.generators, "depth": cfg.depth,
            "dims": free.dims(),
            "basis": {str(p): [free.label(i) for i in free.by_degree[p]]
                      for p in range(1, cfg.depth + 1)} if cfg.emit_bases else None}


def _blocks(u, depth) -> dict:
    return {str(k): dict(type_blocks(u, k)) for k in range(1, depth + 1)}


def run_universal(cfg: RunConfig) -> dict:
    u = build_universal_cr(cfg.n, cfg.mu, cfg.basis_cap)
    out = {"kind": "universal", "n": cfg.n, "mu": cfg.mu, "dims": u.dims(),
           "free_dims": u.free.dims(),
           "ideal_10_dims": [len(u.ideal_10_basis[p]) for p in range(1, cfg.mu + 1)],
           "ideal_01_dims": [len(u.ideal_01_basis[p]) for p in range(1, cfg.mu + 1)],
           "ideal_intersection_dims": [u.ideal_intersection_dim(p) for p in range(1, cfg.mu + 1)],
           "blocks": _blocks(u, cfg.mu)}
    if cfg.emit_bases:
        out["basis"] = {str(p): [u.label(i) for i in u.by_degree[p]] for p in range(1, cfg.mu + 1)}
    return out


def run_symbol(cfg: RunConfig) -> dict:
    s = make_symbol(cfg.n, cfg.mu, cfg.ideal, cfg.basis_cap)
    rf = real_form(s)
    top = {}
    for i in s.by_degree[cfg.mu]:
        key = btype_key(s.btype(i), cfg.n)
        top[key] = top.get(key, 0) + 1
    blocks = _blocks(s.universal, cfg.mu - 1)
    blocks[str(cfg.mu)] = top
    out = {"kind": "symbol", "n": cfg.n, "mu": cfg.mu, "ideal": list(cfg.ideal),
           "dims": s.dims(), "real_dims": rf.dims(), "blocks": blocks,
           "lowest_ideal_basis": [s.universal.format(g) for g in s.lowest_ideal_basis],
           "fundamental": check_fundamental(s)}
    if cfg.emit_bases:
        out["basis"] = {str(p): [s.label(i) for i in s.by_degree[p]] for p in range(1, cfg.mu + 1)}
        out["real_basis"] = [s.format(b) for b in rf.basis]
    return out


def run_prolong(cfg: RunConfig) -> ProlongationResult:
    s = make_symbol(cfg.n, cfg.mu, cfg.ideal, cfg.basis_cap)
    return prolong_until_zero(s, cfg.max_level)


def run_verify(cfg: RunConfig) -> VerificationReport:
    return verify_main_theorem(cfg.n, cfg.mu, cfg.ideal, cfg.max_level, cfg.basis_cap,
                               cfg.emit_bases)


RUNNERS = {"hall": run_hall, "universal": run_universal, "symbol": run_symbol,
           "prolong": run_prolong, "verify": run_verify}


def _prolongation_dict(res: ProlongationResult, emit_bases: bool) -> dict:
    s = res.symbol
    out = {"kind": "prolong", "n": s.n, "mu": s.mu,
           "ideal": [s.universal.format(g) for g in s.ideal_gens],
           "m_dims": s.dims(), "g_dims_complex": res.complex_dims, "g_dims_real": res.real_dims,
           "stabilized_at": res.stabilized_at, "status": res.status,
           "recheck_dim": res.recheck_dim}
    if emit_bases:
        out["bases"] = [[format_map(res.tower, X) for X in lv] for lv in res.bases]
    return out


def report_dict(report, emit_bases: bool = False) -> dict:
    if isinstance(report, VerificationReport):
        return report.to_dict()
    if isinstance(report, ProlongationResult):
        return _prolongation_dict(report, emit_bases)
    if isinstance(report, dict):
        return {k: v for k, v in report.items() if v is not None}
    if isinstance(report, (list, tuple)):
        return {"dims": list(report)}
    raise TypeError(f"cannot emit {type(report).__name__}")


def _table(rows, headers) -> list[str]:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h)
              for k, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    out = [line.rstrip(), "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return out


def _human(d: dict) -> str:
    out = []
    kind = d.get("kind", "verify")
    if "instance" in d:
        inst = d["instance"]
        out.append(f"instance n={inst['n']} mu={inst['mu']} ideal={inst['ideal'] or '0'}")
    elif kind == "hall":
        out.append(f"free Lie algebra on {d['generators']} generators, depth {d['depth']}")
    else:
        out.append(f"{kind} n={d.get('n')} mu={d.get('mu')}")
    dims = d.get("m_dims") or d.get("dims")
    if dims is not None:
        blocks = d.get("m_blocks") or d.get("blocks") or {}
        rows = []
        for p, dim in enumerate(dims, 1):
            bl = blocks.get(str(p), {})
            rows.append([f"-{p}", dim, " ".join(f"{k}:{v}" for k, v in bl.items())])
        out.append("")
        out += _table(rows, ["degree", "dim", "B-type blocks"])
    if "g_dims_real" in d:
        rows = [[l, c, r] for l, (c, r) in enumerate(zip(d["g_dims_complex"], d["g_dims_real"]))]
        out.append("")
        out += _table(rows, ["level", "complex dim", "real dim"])
        out.append(f"stabilized at level {d['stabilized_at']}")
    if "theorem_status" in d:
        out.append(f"dim g1 = {d['g1_real_dim']}, theorem status: {d['theorem_status']}")
    if "checks" in d:
        out.append("")
        rows = [[name, c["status"], c["detail"]] for name, c in d["checks"].items()]
        out += _table(rows, ["check", "status", "detail"])
        for name, c in d["checks"].items():
            if c.get("witness"):
                out.append(f"witness for {name}: {json.dumps(c['witness'], sort_keys=True)}")
    for key in ("real_dims", "lowest_ideal_basis", "fundamental", "ideal_intersection_dims"):
        if key in d:
            out.append(f"{key.replace('_', ' ')}: {d[key]}")
    return "\n".join(out) + "\n"


def emit_report(report, format: str = "machine", emit_bases: bool = False) -> str:
    """Render a verification report, prolongation result, run dict or dims list."""
    d = report_dict(report, emit_bases)
    if format == "machine":
        return json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if format == "human":
        return _human(d)
    raise ValueError(f"unknown format {format!r}")


def report_failed(report) -> bool:
    if isinstance(report, VerificationReport):
        return not report.passed or report.theorem_status == "FAIL"
    if isinstance(report, ProlongationResult):
        return report.recheck_dim not in (None, 0)
    return False


def _run_one(cfg: RunConfig, fmt: str):
    """Worker entry: returns ``(text, failed)``."""
    rep = RUNNERS[cfg.command](cfg)
    return emit_report(rep, fmt, cfg.emit_bases), report_failed(rep)


# -- argument handling ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crtanaka",
                                description="Exact Tanaka prolongations of CR symbols.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", nargs="+", metavar="FILE",
                            help="config file(s); several files form a batch")
        sp.add_argument("--n", type=int)
        sp.add_argument("--mu", type=int)
        sp.add_argument("--ideal", action="append", metavar="EXPR",
                        help="ideal generator (repeatable)")
        sp.add_argument("--basis-cap", type=int)
        sp.add_argument("--emit-bases", action="store_true", default=None)
        sp.add_argument("--output", metavar="PATH")
        sp.add_argument("--format", choices=("machine", "human"), default="human")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("hall", help="Hall basis dimensions")
    sp.add_argument("--generators", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--basis-cap", type=int)
    sp.add_argument("--emit-bases", action="store_true", default=None)
    sp.add_argument("--output", metavar="PATH")
    sp.add_argument("--format", choices=("machine", "human"), default="human")
    sp.set_defaults(config=None, jobs=1)

    common(sub.add_parser("universal", help="universal CR algebra"))
    common(sub.add_parser("symbol", help="CR symbol"))
    for name in ("prolong", "verify"):
        sp = sub.add_parser(name, help=f"{name} a CR symbol")
        common(sp)
        sp.add_argument("--max-level", type=int)
    return p


_FLAG_KEYS = ("n", "mu", "ideal", "basis_cap", "emit_bases", "output", "max_level",
              "generators", "depth")


def configs_from_args(args) -> list[RunConfig]:
    texts = []
    for path in args.config or []:
        try:
            with open(path, encoding="utf-8") as fh:
                texts.append((path, fh.read()))
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    if not texts:
        texts = [("<flags>", "")]
    overrides = {k: getattr(args, k) for k in _FLAG_KEYS if getattr(args, k, None) is not None}
    out = []
    for path, text in texts:
        try:
            cfg = parse_config(text, RunConfig(command=args.command))
        except ConfigError as e:
            raise ConfigError(f"{path}: {e}") from e
        if cfg.command != args.command and "command=" in text:
            raise ConfigError(f"{path}: config is for {cfg.command!r}, not {args.command!r}")
        out.append(replace(cfg, command=args.command, **overrides).validate())
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configs = configs_from_args(args)
        if args.jobs > 1 and len(configs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_one, configs, [args.format] * len(configs)))
        else:
            results = [_run_one(c, args.format) for c in configs]
    except (ConfigError, IdealError, ParseError, ResourceLimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if len(results) == 1:
        text = results[0][0]
    elif args.format == "machine":
        text = "[\n" + ",\n".join(r[0].rstrip("\n") for r in results) + "\n]\n"
    else:
        text = "\n".join(r[0] for r in results)
    dest = configs[0].output
    if dest in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_FAIL if any(r[1] for r in results) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
