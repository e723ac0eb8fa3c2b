"""Run the acceptance criteria outside pytest and print one line per criterion."""

import argparse
import runpy
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    criteria: List[int] = field(default_factory=lambda: list(range(1, 11)))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("criteria", nargs="*", type=int)
    cfg = Config(**{k: v for k, v in vars(ap.parse_args()).items() if v})
    sys.path.insert(0, str(ROOT / "tests"))
    suite = runpy.run_path(str(ROOT / "tests" / "test_acceptance.py"))
    statuses = []
    for n in cfg.criteria:
        status, line = suite["evaluate_criterion"](n)
        print(line, flush=True)
        statuses.append(status)
    return 0 if all(s == "PASS" for s in statuses) else 1


if __name__ == "__main__":
    sys.exit(main())
