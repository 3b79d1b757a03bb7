"""Print the order of the product of two cycle reflections for every label pair."""

import argparse
from dataclasses import dataclass
from math import gcd

from orbipres.grouprep import shi_table


@dataclass
class ShiConfig:
    max_d: int = 6


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=ShiConfig.max_d)
    cfg = ShiConfig(ap.parse_args().max_d)
    for d in range(2, cfg.max_d + 1):
        for row in shi_table(d):
            flag = "coprime" if gcd(row["delta"], d) == 1 else "shared factor"
            print(f"d={d} {row}  {flag}")


if __name__ == "__main__":
    main()
