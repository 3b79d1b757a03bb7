"""Check relator transport along every flip in the reflection quotient.

For each triangulation T and slot k, the relators of the flipped
triangulation are pushed through the generator map and evaluated on
matrices satisfying the relations of T.
"""

import argparse
from dataclasses import dataclass

from orbipres.surface import ConeDisk, enumerate_flip_graph
from orbipres.words import transport_check


@dataclass
class TransportConfig:
    ns: tuple[int, ...] = (2, 3, 4)
    ds: tuple[int, ...] = (2, 3, 4)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=list(TransportConfig.ns))
    ap.add_argument("--d", type=int, nargs="+", default=list(TransportConfig.ds))
    args = ap.parse_args()
    cfg = TransportConfig(tuple(args.n), tuple(args.d))
    for n in cfg.ns:
        for d in cfg.ds:
            total = failed = 0
            for T in enumerate_flip_graph(ConeDisk(n, d)).triangulations:
                for k in T.slots():
                    total += 1
                    failed += not transport_check(T, k).passed
            print(f"n={n} d={d}: {total} flips, {failed} failures")


if __name__ == "__main__":
    main()
