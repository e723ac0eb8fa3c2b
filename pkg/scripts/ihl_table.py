"""Print iHL functions for all partitions up to a size, next to their Hall-Littlewood limits."""

import argparse
from dataclasses import dataclass

from ihall.symfun import hl_Q, ihl_Q, partitions


@dataclass
class Config:
    max_size: int = 3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    cfg = Config(ap.parse_args().max_size)
    for n in range(1, cfg.max_size + 1):
        for lam in partitions(n):
            name = ",".join(map(str, lam.parts))
            print(f"Q^i({name}) = {ihl_Q(lam).render()}")
            print(f"Q({name})   = {hl_Q(lam).render()}")


if __name__ == "__main__":
    main()
