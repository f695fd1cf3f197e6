"""Command-line surface: ``grasscodim <command> [flags]``.

Output goes to stdout as JSON (sorted keys) or CSV; diagnostics go to stderr.
Exit codes: 0 success, 1 a check failed (identity violation, rank gap),
2 invalid configuration, 3 oracle instability (rank changed between N and N+4).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from typing import Sequence

from .codim import (codim_report, exact_codim, formula_ledger, oracle_bidegree, oracle_dim,
                    w_bounds)
from .counting import CountParams, c_family
from .freealg import Multidegree, parse
from .gf import is_prime, make_field
from .grassmann import GradingSpec, parse_grading
from .identities import identity_basis, verify
from .rewrite import normal_form
from .structure import FAMILIES, MODES

__all__ = ["RunConfig", "run", "main", "COMMANDS", "EXIT_OK", "EXIT_FAILED", "EXIT_CONFIG",
           "EXIT_UNSTABLE"]

COMMANDS = ("count", "codim", "bounds", "verify-identities", "normal-form", "oracle", "ledger")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    q: int | None = None
    grading: str = "can"
    k: int | None = None
    l: int = 1  # noqa: E741
    m: int = 1
    n1: int = 1
    n2: int = 1
    a: str | None = None
    b: str | None = None
    N: int | None = None
    samples: int | None = None
    seed: int = 0
    format: str = "json"
    mode: str = "psi"
    family: str | None = None
    strategy: str = "random"
    bound: int = 2
    max_total: int | None = None
    max_k: int = 2
    polynomial: str | None = None

    @property
    def qq(self) -> int:
        return self.q if self.q is not None else self.p

    @property
    def m_ext(self) -> int:
        e, qq = 0, self.qq
        while qq > 1:
            qq //= self.p
            e += 1
        return e

    def spec(self) -> GradingSpec:
        try:
            return parse_grading(self.grading, self.k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def params(self) -> CountParams:
        try:
            return CountParams(self.p, self.qq, self.l, self.m, self.spec().k, self.n1, self.n2,
                               self.mode)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self, command: str) -> None:
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        if not is_prime(self.p) or self.p == 2:
            raise ConfigError(f"p must be an odd prime, got {self.p}")
        qq = self.qq
        while qq % self.p == 0 and qq > 1:
            qq //= self.p
        if qq != 1 or self.qq < self.p:
            raise ConfigError(f"q={self.qq} is not a power of p={self.p}")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.family is not None and self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}")
        if self.strategy not in ("random", "exhaustive"):
            raise ConfigError("strategy must be random or exhaustive")
        if min(self.l, self.m) < 1:
            raise ConfigError("l and m must be at least 1")
        if min(self.n1, self.n2) < 0:
            raise ConfigError("n1 and n2 must be nonnegative")
        top = 63 if command == "verify-identities" else 59  # rank commands re-check at N+4
        if self.N is not None and not 1 <= self.N <= top:
            raise ConfigError(f"N must lie in 1..{top} for {command}")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be positive")
        if command == "normal-form" and not self.polynomial:
            raise ConfigError("normal-form needs a polynomial argument")
        self.spec()


def _int_list(text: str, name: str) -> tuple[int, ...]:
    text = text.strip().strip("()[]")
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated list of integers") from None


def _dump(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True)
    rows = obj if isinstance(obj, list) else [obj]
    rows = [{k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
             for k, v in r.items()} for r in rows]
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _params_dict(cfg: RunConfig) -> dict:
    return {"p": cfg.p, "q": cfg.qq, "l": cfg.l, "m": cfg.m, "k": cfg.spec().k,
            "n1": cfg.n1, "n2": cfg.n2, "mode": cfg.mode}


def _cmd_count(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    fam = cfg.family or spec.family
    pr = cfg.params()
    fv, ev = c_family(fam, pr, "formula"), c_family(fam, pr, "enumeration")
    return EXIT_OK, {"family": fam, "params": _params_dict(cfg), "formula_value": fv,
                     "enumeration_value": ev, "match": fv == ev}


def _bidegrees(cfg: RunConfig) -> list[tuple[int, int]]:
    if cfg.max_total is None:
        return [(cfg.n1, cfg.n2)]
    return [(a, t - a) for t in range(cfg.max_total + 1) for a in range(t, -1, -1)]


def _bidegree_row(cfg: RunConfig, spec: GradingSpec, n1: int, n2: int) -> tuple[dict, dict]:
    pr = replace(cfg, n1=n1, n2=n2).params()
    exact = exact_codim(n1, n2, spec, pr)
    cert = oracle_bidegree(n1, n2, cfg.l, cfg.m, spec, cfg.p, cfg.qq, n=cfg.N,
                           samples=cfg.samples, seed=cfg.seed, predicted=exact)
    lo, hi = w_bounds(n1 + n2, n1, n2, spec, pr)
    row = {"n1": n1, "n2": n2, "exact": exact, "oracle": cert.rank, "lower": lo, "upper": hi,
           "stable": cert.stable}
    return row, cert.to_dict()


def _cmd_codim(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    rows, certs = [], []
    for n1, n2 in _bidegrees(cfg):
        row, cert = _bidegree_row(cfg, spec, n1, n2)
        rows.append(row)
        certs.append(cert)
    code = EXIT_UNSTABLE if not all(r["stable"] for r in rows) else (
        EXIT_OK if all(r["exact"] == r["oracle"] for r in rows) else EXIT_FAILED)
    if cfg.format == "csv":
        return code, rows
    out = []
    for (n1, n2), row, cert in zip(_bidegrees(cfg), rows, certs):
        rep = codim_report(n1, n2, spec, replace(cfg, n1=n1, n2=n2).params())
        rep.update(params=_params_dict(replace(cfg, n1=n1, n2=n2)), oracle=row["oracle"],
                   certificate=cert)
        out.append(rep)
    return code, out[0] if cfg.max_total is None else out


def _cmd_bounds(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    out = []
    for n1, n2 in _bidegrees(cfg):
        pr = replace(cfg, n1=n1, n2=n2).params()
        row, cert = _bidegree_row(cfg, spec, n1, n2)
        lo_f, hi_f = w_bounds(n1 + n2, n1, n2, spec, pr, reading="formula")
        rank = row["oracle"]
        out.append({"grading": spec.label, "n1": n1, "n2": n2, "oracle": rank,
                    "stable": row["stable"],
                    "enumeration_reading": {"lower": row["lower"], "upper": row["upper"],
                                            "holds": row["lower"] <= rank <= row["upper"]},
                    "formula_reading": {"lower": lo_f, "upper": hi_f,
                                        "holds": lo_f <= rank <= hi_f}})
    if not all(r["stable"] for r in out):
        code = EXIT_UNSTABLE
    elif all(r["enumeration_reading"]["holds"] or r["formula_reading"]["holds"] for r in out):
        code = EXIT_OK
    else:
        code = EXIT_FAILED
    if cfg.format == "csv":
        out = [{"grading": r["grading"], "n1": r["n1"], "n2": r["n2"], "oracle": r["oracle"],
                "stable": r["stable"], "lower": r["enumeration_reading"]["lower"],
                "upper": r["enumeration_reading"]["upper"],
                "lower_formula": r["formula_reading"]["lower"],
                "upper_formula": r["formula_reading"]["upper"]} for r in out]
        return code, out
    return code, out[0] if cfg.max_total is None else out


def _cmd_verify(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    field = make_field(cfg.p, cfg.m_ext)
    basis = identity_basis(spec, field, p=cfg.p, q=cfg.qq)
    if cfg.strategy == "exhaustive":
        n = cfg.N if cfg.N is not None else 6
        if n > 8:
            raise ConfigError("exhaustive verification is meant for N <= 8")
        reps = verify(basis, n=n, strategy="exhaustive", bound=cfg.bound)
    else:
        n = cfg.N if cfg.N is not None else 40
        reps = verify(basis, n=n, strategy="random", samples=cfg.samples or 10000, seed=cfg.seed)
    for r in reps:
        r["grading"] = spec.label
        r["field"] = f"GF({cfg.qq})"
    code = EXIT_OK if all(r["violations"] == 0 for r in reps) else EXIT_FAILED
    if cfg.format == "json":
        return code, {"grading": spec.label, "field": f"GF({cfg.qq})", "generators": reps,
                      "total_violations": sum(r["violations"] for r in reps)}
    return code, reps


def _cmd_normal_form(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    field = make_field(cfg.p, cfg.m_ext)
    try:
        f = parse(cfg.polynomial, field)
    except ValueError as exc:
        raise ConfigError(f"cannot parse polynomial: {exc}") from None
    nf = normal_form(f, spec, seed=cfg.seed)
    if cfg.format == "csv":
        return EXIT_OK, nf.to_json_obj() or [{"ppoly": "", "term": "", "coeff": 0}]
    return EXIT_OK, str(nf)


def _cmd_oracle(cfg: RunConfig) -> tuple[int, object]:
    spec = cfg.spec()
    if cfg.a is not None or cfg.b is not None:
        md = Multidegree(_int_list(cfg.a or "", "a"), _int_list(cfg.b or "", "b"))
        if any(x < 0 for x in md.a + md.b):
            raise ConfigError("multidegree entries must be nonnegative")
        if any(x >= cfg.p * cfg.qq for x in md.a) or any(x > cfg.p for x in md.b):
            raise ConfigError("multidegree out of bounds: need a_i < pq and b_j <= p")
        cert = oracle_dim(md, spec, cfg.p, cfg.qq, n=cfg.N, samples=cfg.samples, seed=cfg.seed,
                          mode=cfg.mode)
    else:
        cert = oracle_bidegree(cfg.n1, cfg.n2, cfg.l, cfg.m, spec, cfg.p, cfg.qq, n=cfg.N,
                               samples=cfg.samples, seed=cfg.seed)
    d = cert.to_dict()
    code = EXIT_UNSTABLE if not cert.stable else (EXIT_OK if cert.ok else EXIT_FAILED)
    return code, d


def _cmd_ledger(cfg: RunConfig) -> tuple[int, object]:
    families = [cfg.family] if cfg.family else list(FAMILIES)
    total = cfg.max_total if cfg.max_total is not None else 6
    rows = formula_ledger(families, cfg.p, cfg.qq, range(1, cfg.l + 1), range(1, cfg.m + 1),
                          range(cfg.max_k + 1), total, cfg.mode)
    if cfg.format == "json":
        return EXIT_OK, {"discrepancies": rows, "count": len(rows)}
    return EXIT_OK, rows or [{"family": "", "n1": "", "n2": "", "formula": "",
                              "enumeration": ""}]


_DISPATCH = {
    "count": _cmd_count,
    "codim": _cmd_codim,
    "bounds": _cmd_bounds,
    "verify-identities": _cmd_verify,
    "normal-form": _cmd_normal_form,
    "oracle": _cmd_oracle,
    "ledger": _cmd_ledger,
}


def run(command: str, config: RunConfig) -> tuple[int, str]:
    """Validate ``config`` and execute ``command``; returns (exit code, report text)."""
    config.validate(command)
    code, obj = _DISPATCH[command](config)
    if isinstance(obj, str):
        return code, obj
    return code, _dump(obj, config.format)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value: str):
    kind = _FIELD_TYPES[key]
    if "int" in kind and value.strip().lower() in ("", "none") and "None" in kind:
        return None
    if "int" in kind:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    return value


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grasscodim",
                                 description="Graded identities and codimensions of the "
                                             "Grassmann algebra over finite fields.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("polynomial", nargs="?", help="polynomial for normal-form, e.g. 'z2*z1'")
    ap.add_argument("--config", help="flat key=value file overriding the flags")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--q", type=int, default=None, help="field size, a power of p (default p)")
    ap.add_argument("--grading", default="can", help="can, inf, kstar, k (or kstar2, k1, ...)")
    ap.add_argument("--k", type=int, default=None)
    ap.add_argument("--l", type=int, default=1, help="number of even variables")
    ap.add_argument("--m", type=int, default=1, help="number of odd variables")
    ap.add_argument("--n1", type=int, default=1)
    ap.add_argument("--n2", type=int, default=1)
    ap.add_argument("--a", default=None, help="y-degrees of a multidegree, e.g. 1,0")
    ap.add_argument("--b", default=None, help="z-degrees of a multidegree, e.g. 1,1")
    ap.add_argument("--N", type=int, default=None, help="number of Grassmann generators")
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", default="json", choices=("json", "csv"))
    ap.add_argument("--mode", default="psi", choices=MODES)
    ap.add_argument("--family", default=None, choices=FAMILIES)
    ap.add_argument("--strategy", default="random", choices=("random", "exhaustive"))
    ap.add_argument("--bound", type=int, default=2, help="blades per image, exhaustive mode")
    ap.add_argument("--max-total", dest="max_total", type=int, default=None,
                    help="tabulate every bidegree with n1 + n2 <= this")
    ap.add_argument("--max-k", dest="max_k", type=int, default=2, help="ledger: largest k")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = _parser()
    args = ap.parse_intermixed_args(argv)
    values = {k: v for k, v in vars(args).items() if k in _FIELD_TYPES}
    try:
        if args.config:
            values.update(read_config(args.config))
        cfg = RunConfig(**values)
        code, text = run(args.command, cfg)
    except ConfigError as exc:
        print(f"grasscodim: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(text)
    if code == EXIT_UNSTABLE:
        print("grasscodim: oracle rank changed between N and N+4", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
