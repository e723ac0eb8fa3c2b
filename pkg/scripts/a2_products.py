"""Multiplication table of simples and torus generators in the iHall algebra of split A2."""

import argparse
from dataclasses import dataclass

from ihall.ihallalg import IHallContext
from ihall.quiver import linear_quiver, validate_iquiver


@dataclass
class Config:
    q: int = 2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=Config.q)
    cfg = Config(ap.parse_args().q)
    ctx = IHallContext(validate_iquiver(linear_quiver(2)), cfg.q)
    gens = {"S1": ctx.simple("1"), "S2": ctx.simple("2"), "E1": ctx.E("1"), "E2": ctx.E("2")}
    for (nx, x) in gens.items():
        for (ny, y) in gens.items():
            print(f"{nx}*{ny} = {ctx.render(x * y)}")


if __name__ == "__main__":
    main()
