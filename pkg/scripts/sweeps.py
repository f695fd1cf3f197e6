"""Diagnostic sweeps over multidegrees and bidegrees, printed as JSON lines.

    python3 scripts/sweeps.py certificates --max-total 5
    python3 scripts/sweeps.py sandwich --l 2 --m 2 --max-total 5

``certificates`` reports every oracle certificate that is not ok (a rank below the
predicted size means the multifree basis is dependent in E); ``sandwich`` reports
every bidegree where one of the two bound readings fails.
"""

from __future__ import annotations

import argparse
import json

from grasscodim.codim import oracle_bidegree, oracle_dim, w_bounds
from grasscodim.counting import CountParams
from grasscodim.grassmann import Canonical, Infinity, K, KStar, parse_grading
from grasscodim.structure import multidegrees

SPECS = [Canonical(), Infinity(), KStar(0), KStar(1), KStar(2), K(1), K(2)]


def _specs(label: str | None):
    return SPECS if label is None else [parse_grading(label)]


def certificates(args) -> None:
    seen = set()
    for spec in _specs(args.grading):
        for l in range(1, args.l + 1):  # noqa: E741
            for m in range(1, args.m + 1):
                for total in range(args.max_total + 1):
                    for n1 in range(total + 1):
                        for md in multidegrees(n1, total - n1, l, m):
                            if (spec, md) in seen:
                                continue
                            seen.add((spec, md))
                            cert = oracle_dim(md, spec, args.p, args.q, seed=args.seed)
                            if not cert.ok or args.all:
                                print(json.dumps({"grading": spec.label, "multidegree": str(md),
                                                  **cert.to_dict()}, sort_keys=True))


def sandwich(args) -> None:
    for spec in _specs(args.grading):
        params = CountParams(args.p, args.q, args.l, args.m, spec.k)
        for n in range(args.max_total + 1):
            for n1 in range(n + 1):
                n2 = n - n1
                cert = oracle_bidegree(n1, n2, args.l, args.m, spec, args.p, args.q,
                                       seed=args.seed)
                row = {"grading": spec.label, "n1": n1, "n2": n2, "rank": cert.rank,
                       "stable": cert.stable}
                for r in ("enumeration", "formula"):
                    lo, hi = w_bounds(n, n1, n2, spec, params, reading=r)
                    row[r] = {"lower": lo, "upper": hi, "holds": lo <= cert.rank <= hi}
                if args.all or not (row["enumeration"]["holds"] and row["formula"]["holds"]):
                    print(json.dumps(row, sort_keys=True))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sweep", choices=("certificates", "sandwich"))
    ap.add_argument("--grading", default=None, help="one grading label, e.g. k1")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--max-total", dest="max_total", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all", action="store_true", help="print passing rows too")
    args = ap.parse_args()
    {"certificates": certificates, "sandwich": sandwich}[args.sweep](args)


if __name__ == "__main__":
    main()
