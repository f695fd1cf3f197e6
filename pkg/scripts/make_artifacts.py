"""Write a deterministic set of JSON artifacts for one master seed.

Each artifact is the output of a CLI command (or a small library sweep) at
desk scale.  Running twice with the same --seed must give identical bytes.

    python3 scripts/make_artifacts.py --seed 0 --out artifacts/
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from grasscodim.cli import RunConfig, run
from grasscodim.freealg import random_polynomial
from grasscodim.gf import make_field
from grasscodim.grassmann import Canonical, Infinity, K, KStar
from grasscodim.rewrite import normal_form
from grasscodim.sampling import derive_seed

SPECS = [Canonical(), Infinity(), KStar(1), K(1)]


def cli_artifacts(seed: int) -> dict[str, str]:
    jobs = {
        "count_kstar1_2_1": ("count", RunConfig(grading="kstar", k=1, l=2, m=2, n1=2, n2=1)),
        "codim_can_table": ("codim", RunConfig(grading="can", l=1, m=1, max_total=3, seed=seed)),
        "bounds_k1_1_2": ("bounds", RunConfig(grading="k", k=1, l=2, m=2, n1=1, n2=2,
                                              seed=seed)),
        "oracle_k1_md": ("oracle", RunConfig(grading="k", k=1, a="1", b="1,1", seed=seed)),
        "verify_k1": ("verify-identities", RunConfig(grading="k", k=1, samples=500, seed=seed)),
        "verify_inf_gf9": ("verify-identities", RunConfig(grading="inf", q=9, samples=300,
                                                          seed=seed)),
        "normal_form_can": ("normal-form", RunConfig(grading="can", polynomial="z2*z1",
                                                     format="csv")),
        "ledger": ("ledger", RunConfig(l=2, m=2, max_total=4)),
    }
    out = {}
    for name, (cmd, cfg) in jobs.items():
        code, text = run(cmd, cfg)
        if cfg.format == "csv":
            text = json.dumps({"csv": text.splitlines()}, indent=2, sort_keys=True)
        out[name] = json.dumps({"exit_code": code, "report": json.loads(text)}, indent=2,
                               sort_keys=True)
    return out


def normal_form_artifact(seed: int, count: int = 20) -> str:
    field = make_field(3)
    rows = []
    for spec in SPECS:
        rng = np.random.default_rng(derive_seed(seed, "artifact-nf", spec.label))
        for _ in range(count):
            f = random_polynomial(field, 2, 2, (4, 3), rng)
            nf = normal_form(f, spec, seed=seed)
            rows.append({"grading": spec.label, "input": str(f), "normal_form": str(nf),
                         "deficits": nf.deficits})
    return json.dumps(rows, indent=2, sort_keys=True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = cli_artifacts(args.seed)
    artifacts["normal_forms"] = normal_form_artifact(args.seed)
    for name, text in sorted(artifacts.items()):
        (out / f"{name}.json").write_text(text + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
