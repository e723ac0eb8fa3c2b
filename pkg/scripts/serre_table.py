"""Quantum Serre residuals for small rank-two quivers, with timings."""

import argparse
import time
from dataclasses import dataclass
from typing import Tuple

from ihall.hallcore import verify_quantum_serre


@dataclass
class Config:
    max_arrows: int = 3
    primes: Tuple[int, ...] = (2, 3)
    closed_form_max: int = 2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-arrows", type=int, default=Config.max_arrows)
    ap.add_argument("--q", type=int, action="append")
    args = ap.parse_args()
    cfg = Config(args.max_arrows, tuple(args.q or Config.primes))
    for total in range(1, cfg.max_arrows + 1):
        for a in range(total, -1, -1):
            for q in cfg.primes:
                start = time.perf_counter()
                rep = verify_quantum_serre(a, total - a, q, cfg.closed_form_max)
                print(f"{rep.summary()}  [{time.perf_counter() - start:.1f}s]")


if __name__ == "__main__":
    main()
