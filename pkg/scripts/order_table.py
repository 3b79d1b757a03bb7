"""Tabulate coset-enumeration orders of the reflection-quotient presentations.

Every triangulation of the cone disk is enumerated and the order of its
presented group is compared with d^(n-1) n!.
"""

import argparse
import time
from dataclasses import dataclass
from math import factorial

from orbipres.coset import todd_coxeter
from orbipres.present import relations_from_quiver
from orbipres.quiver import quiver_from_triangulation
from orbipres.surface import ConeDisk, enumerate_flip_graph


@dataclass
class OrderTableConfig:
    ns: tuple[int, ...] = (2, 3, 4)
    ds: tuple[int, ...] = (2, 3, 4)
    strategy: str = "hlt"
    variant: str = "reflection"


def run(cfg: OrderTableConfig) -> list[dict]:
    rows = []
    for n in cfg.ns:
        for d in cfg.ds:
            start = time.perf_counter()
            orders = set()
            ts = enumerate_flip_graph(ConeDisk(n, d)).triangulations
            for T in ts:
                P = relations_from_quiver(quiver_from_triangulation(T), cfg.variant)
                orders.add(todd_coxeter(P, strategy=cfg.strategy).index)
            rows.append(
                {
                    "n": n,
                    "d": d,
                    "triangulations": len(ts),
                    "orders": sorted(o for o in orders if o is not None),
                    "expected": d ** (n - 1) * factorial(n),
                    "seconds": round(time.perf_counter() - start, 2),
                }
            )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=list(OrderTableConfig.ns))
    ap.add_argument("--d", type=int, nargs="+", default=list(OrderTableConfig.ds))
    ap.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    args = ap.parse_args()
    cfg = OrderTableConfig(tuple(args.n), tuple(args.d), args.strategy)
    print(f"{'n':>2} {'d':>2} {'#T':>5} {'expected':>9}  orders  seconds")
    for r in run(cfg):
        print(f"{r['n']:>2} {r['d']:>2} {r['triangulations']:>5} {r['expected']:>9}  {r['orders']}  {r['seconds']}")


if __name__ == "__main__":
    main()
