"""``qwscreen`` command-line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .field import parse_monomial
from .solver import MODEL_KINDS
from .suites import DEFAULT_SAMPLES, SUITES, SuiteConfig, parse_sample, run_suite
from .voa import ModelError

CONFIG_KEYS = ("order", "level", "q2p", "json", "perturb", "numeric", "model", "pair")


class ConfigError(ValueError):
    pass


def read_config(path: str | Path) -> dict[str, list[str]]:
    """Flat ``key = value`` file; ``#`` starts a comment; ``numeric`` may repeat."""
    out: dict[str, list[str]] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out.setdefault(key, []).append(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwscreen", description="Verify screening-operator commutant models.")
    sub = parser.add_subparsers(dest="suite", required=True)
    for name in SUITES:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--order", type=int, help="truncation order N (default 24)")
        p.add_argument("--level", type=int, help="Fock level cutoff L (default 4)")
        p.add_argument("--q2p", help="override the free monomial q'_2, e.g. p^(3/2)")
        p.add_argument("--json", help="write the JSON report to this path ('-' for stdout)")
        p.add_argument("--perturb", help="multiply the named constant by q (negative control)")
        p.add_argument("--numeric", action="append", metavar="q,beta,x", help="numeric sample; repeatable")
        if name == "expand":
            p.add_argument("--model", choices=MODEL_KINDS, help="model (default q-virasoro)")
            p.add_argument("--pair", help="operator names 'left,right', e.g. L1,S1")
    return parser


def make_config(args: argparse.Namespace) -> SuiteConfig:
    file_values = read_config(args.config) if args.config else {}

    def pick(key: str):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        vals = file_values.get(key)
        return vals[-1] if vals else None

    order = pick("order")
    level = pick("level")
    q2p = pick("q2p")
    numeric = args.numeric if args.numeric else file_values.get("numeric")
    pair = pick("pair")
    kwargs = dict(
        suite=args.suite,
        order=int(order) if order is not None else (8 if args.suite == "fock-oracle" else 24),
        level=int(level) if level is not None else 4,
        samples=tuple(parse_sample(s) for s in numeric) if numeric else DEFAULT_SAMPLES,
        json_path=pick("json"),
        q2p=parse_monomial(q2p) if q2p is not None else None,
        perturb=pick("perturb"),
    )
    if args.suite == "expand":
        kwargs["model"] = pick("model") or "q-virasoro"
        if pair is not None:
            parts = [s.strip() for s in pair.split(",")]
            if len(parts) != 2:
                raise ConfigError("--pair expects two operator names separated by a comma")
            kwargs["pair"] = (parts[0], parts[1])
    return SuiteConfig(**kwargs)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report = run_suite(cfg)
    except (ConfigError, ValueError, ModelError, OSError) as exc:
        print(f"qwscreen: error: {exc}", file=sys.stderr)
        return 2
    if cfg.json_path == "-":
        sys.stdout.write(report.to_json())
    else:
        print(report.text())
        if cfg.json_path:
            Path(cfg.json_path).write_text(report.to_json(), encoding="utf-8")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
