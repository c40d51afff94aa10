"""Command-line front end.

Exit codes: 0 success, 1 verification or witness failure (or an exhausted
resource budget), 2 usage error. Flags override values from ``--config``;
environment variables are never read for run configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from sympy import nextprime

from . import _backend
from .curves import represent, verify_gauss
from .errors import (
    BadParameters,
    DiophantineError,
    NoWitness,
    NotOddPrime,
    ResourceLimit,
    VerificationError,
)
from .field import make_field
from .report import PLOT_HEADERS, TABLE1_HEADER, plot_rows, table_row
from .tuples import (
    count_tuples,
    enumerate_array,
    existence_bound,
    find_witness,
)
from .verify import DEFAULT_SEED, SUITES, odd_primes, run_suite

COMMANDS = ("enumerate", "count", "table1", "verify", "plotdata", "witness", "represent", "curve", "bound")
FORMATS = ("csv", "json", "tuples-text")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    primes: list[int] = field(default_factory=list)
    pmin: int = 5
    pmax: int | None = None
    k: int | None = None
    m: int | None = None
    D: int | None = None
    output: str = "-"
    format: str | None = None
    workers: int = 1
    max_tuples: int | None = None
    max_seconds: float | None = None
    max_nodes: int = 1_000_000
    verify: bool = True
    suite: str = "all"
    seed: int = DEFAULT_SEED
    samples: int = 1000
    kind: str = "linear"
    above_bound: bool = False
    timing: bool = True
    backend: str | None = None

    def validate(self) -> None:
        if self.workers < 1:
            raise UsageError("worker count must be >= 1")
        if self.format is not None and self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.k is not None and self.m is not None and self.k > self.m:
            raise UsageError("k exceeds m")
        for q in self.primes:
            make_field(q)
        if self.p is not None:
            make_field(self.p)


def _parse_primes(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdio", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("-o", "--output", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--workers", type=int)
    common.add_argument("--backend", choices=_backend.BACKENDS)
    common.add_argument("--no-timing", dest="timing", action="store_const", const=False,
                        help="write 0 for every elapsed-time field")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        return sub.add_parser(name, parents=[common], help=help_,
                              argument_default=argparse.SUPPRESS)

    p = cmd("enumerate", "list every k-Diophantine m-tuple in F_p")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--max-tuples", type=int)
    p.add_argument("--max-seconds", type=float)

    p = cmd("count", "count k-Diophantine m-tuples without listing them")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--no-verify", dest="verify", action="store_const", const=False)

    p = cmd("table1", "N3(p) by enumeration and by closed form")
    p.add_argument("--primes", type=_parse_primes)
    p.add_argument("--pmin", type=int)
    p.add_argument("--pmax", type=int)

    p = cmd("verify", "run dual-evaluation sweeps")
    p.add_argument("--suite", choices=SUITES + ("all",))
    p.add_argument("--pmax", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)

    p = cmd("plotdata", "N3(p) series for plotting")
    p.add_argument("--pmin", type=int)
    p.add_argument("--pmax", type=int)
    p.add_argument("--primes", type=_parse_primes)
    p.add_argument("--kind", choices=tuple(PLOT_HEADERS))

    p = cmd("witness", "construct a k-Diophantine m-tuple")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--above-bound", action="store_const", const=True)
    p.add_argument("--max-nodes", type=int)

    p = cmd("represent", "p = a^2 + 3b^2 with a = 2 (mod 3)")
    p.add_argument("--p", type=int)

    p = cmd("curve", "point count of y^2 = x^3 + D against Gauss's formula")
    p.add_argument("--p", type=int)
    p.add_argument("--D", type=int)

    p = cmd("bound", "prime threshold guaranteeing a k-Diophantine m-tuple")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    return parser


def load_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    values: dict = {}
    if ns.get("config"):
        try:
            values.update(json.loads(Path(ns["config"]).read_text(encoding="utf-8")))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {ns['config']}: {exc}") from exc
    values.update({key: val for key, val in ns.items() if val is not None and key != "config"})
    values = {key.replace("-", "_"): val for key, val in values.items()}
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output helpers


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs --{', --'.join(missing)}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# knobs that never change results; kept out of the echoed config so output
# is byte-identical across worker counts and backends
_EXECUTION_KEYS = ("output", "timing", "workers", "backend")


def _json_text(cfg: RunConfig, results, elapsed_ms: float) -> str:
    doc = {
        "command": cfg.command,
        "config": {k: v for k, v in asdict(cfg).items() if k not in _EXECUTION_KEYS},
        "results": results,
        "elapsed_ms": round(elapsed_ms, 3) if cfg.timing else 0,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text, encoding="utf-8", newline="\n")


def _primes_for(cfg: RunConfig) -> list[int]:
    if cfg.primes:
        return sorted(set(cfg.primes))
    if cfg.pmax is None:
        return []
    return odd_primes(cfg.pmin, cfg.pmax)


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "p", "k", "m")
    F = make_field(cfg.p)
    rows = enumerate_array(cfg.k, cfg.m, F, workers=cfg.workers,
                           max_tuples=cfg.max_tuples, max_seconds=cfg.max_seconds).tolist()
    fmt = cfg.format or "tuples-text"
    if fmt == "tuples-text":
        text = "".join("(" + ", ".join(map(str, r)) + ")\n" for r in rows)
    elif fmt == "csv":
        text = _csv_text([f"a{i + 1}" for i in range(cfg.m)], rows)
    else:
        elapsed = (time.perf_counter() - t0) * 1000
        text = _json_text(cfg, {"count": len(rows), "tuples": rows}, elapsed)
    _emit(cfg, text)
    return 0


def cmd_count(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "p", "k", "m")
    report = count_tuples(cfg.k, cfg.m, make_field(cfg.p), workers=cfg.workers,
                          max_seconds=cfg.max_seconds, verify=cfg.verify)
    elapsed_ms = report.elapsed * 1000 if cfg.timing else 0
    row = {"p": report.p, "k": report.k, "m": report.m, "brute_count": report.brute_count,
           "closed_form": report.closed_form, "delta": report.delta, "elapsed_ms": elapsed_ms}
    if cfg.format == "csv":
        text = _csv_text(list(row), [["" if v is None else v for v in row.values()]])
    else:
        text = _json_text(cfg, row, (time.perf_counter() - t0) * 1000)
    _emit(cfg, text)
    return 0


def cmd_table1(cfg: RunConfig, t0: float) -> int:
    primes = _primes_for(cfg)
    if not primes:
        raise UsageError("table1 needs a non-empty prime list (--primes or --pmax)")
    if min(primes) < 5:
        raise UsageError("table1 needs primes >= 5")
    rows = [table_row(p, cfg.workers, cfg.timing) for p in primes]
    if cfg.format == "json":
        text = _json_text(cfg, [r.as_dict() for r in rows], (time.perf_counter() - t0) * 1000)
    else:
        text = _csv_text(TABLE1_HEADER, [r.as_csv() for r in rows])
    _emit(cfg, text)
    return 0 if all(r.n3_brute == r.n3_formula for r in rows) else 1


def cmd_verify(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "pmax")
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    results = {}
    status = 0
    for name in names:
        res = run_suite(name, cfg.pmax, cfg.seed, cfg.samples, cfg.workers)
        results[name] = res.as_dict()
        if not res.ok:
            status = 1
            print(f"verify {name}: counterexample: {res.counterexample}", file=sys.stderr)
            break
    _emit(cfg, _json_text(cfg, results, (time.perf_counter() - t0) * 1000))
    return status


def cmd_plotdata(cfg: RunConfig, t0: float) -> int:
    primes = [p for p in _primes_for(cfg) if p >= 5]
    rows = plot_rows(primes, cfg.kind, cfg.workers)
    _emit(cfg, _csv_text(PLOT_HEADERS[cfg.kind], rows))
    return 0


def cmd_witness(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "k", "m")
    bound = existence_bound(cfg.k, cfg.m)
    if cfg.above_bound:
        p = int(nextprime(bound.bound))
    elif cfg.p is not None:
        p = cfg.p
    else:
        raise UsageError("witness needs --p or --above-bound")
    F = make_field(p)
    result = {"bound": str(bound.bound), "p": p, "above_bound": p > bound.bound}
    try:
        w = find_witness(cfg.k, cfg.m, F, max_nodes=cfg.max_nodes)
    except NoWitness as exc:
        print(f"no witness at p={p} (bound {bound.bound}): {exc}", file=sys.stderr)
        result.update(witness=None, error=str(exc))
        _emit(cfg, _json_text(cfg, result, (time.perf_counter() - t0) * 1000))
        return 1
    result.update(witness=list(w.tuple), start=list(w.start),
                  extension_trace=w.extension_trace, g=w.candidate_count,
                  backtracks=w.backtracks)
    _emit(cfg, _json_text(cfg, result, (time.perf_counter() - t0) * 1000))
    return 0


def cmd_represent(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "p")
    rep = represent(make_field(cfg.p))
    _emit(cfg, _json_text(cfg, {"p": cfg.p, "a": rep.a, "b": rep.b},
                          (time.perf_counter() - t0) * 1000))
    return 0


def cmd_curve(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "p", "D")
    cc = verify_gauss(cfg.D, make_field(cfg.p))
    result = {"p": cc.p, "D": cc.D, "exact": cc.exact, "candidates": sorted(cc.candidates)}
    _emit(cfg, _json_text(cfg, result, (time.perf_counter() - t0) * 1000))
    return 0


def cmd_bound(cfg: RunConfig, t0: float) -> int:
    _require(cfg, "k", "m")
    b = existence_bound(cfg.k, cfg.m)
    result = {
        "k": b.k, "m": b.m, "bound": str(b.bound),
        "k3_bound": None if b.k3_bound is None else str(b.k3_bound),
        "diagonal_bound": None if b.diagonal_bound is None else str(b.diagonal_bound),
    }
    _emit(cfg, _json_text(cfg, result, (time.perf_counter() - t0) * 1000))
    return 0


HANDLERS = {
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "table1": cmd_table1,
    "verify": cmd_verify,
    "plotdata": cmd_plotdata,
    "witness": cmd_witness,
    "represent": cmd_represent,
    "curve": cmd_curve,
    "bound": cmd_bound,
}


def main(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        cfg = load_config(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except (UsageError, NotOddPrime, BadParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        _backend.set_workers(cfg.workers)
        with _backend.use_backend(cfg.backend or _backend.backend()):
            return HANDLERS[cfg.command](cfg, t0)
    except (UsageError, NotOddPrime, BadParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimit, VerificationError, NoWitness) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DiophantineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
