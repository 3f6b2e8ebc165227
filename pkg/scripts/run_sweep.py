"""Kernel of A -> e_k(A) against G_{k+1} over a grid of (n, m, k); writes a CSV and prints a summary."""

import argparse
import csv
import os
import time
from dataclasses import dataclass, fields
from math import comb

from hyperoct.cli import sweep_cells
from hyperoct.octagen import verify_zkernel


@dataclass
class SweepConfig:
    max_m: int = 4
    extra: int = 3
    out: str = "results/sweep.csv"


def run(cfg):
    rows = []
    t0 = time.perf_counter()
    for n, m, k in sorted(sweep_cells(cfg.max_m, cfg.extra)):
        r = verify_zkernel(n, m, k)
        expected = max(0, comb(n, m) - comb(n, k))
        rows.append([n, m, k, comb(n, m), r.kernel_rank, expected, r.g_rank, r.equal, r.elapsed_ms])
    total = time.perf_counter() - t0
    return rows, total


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for f in fields(SweepConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    cfg = SweepConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args()).items()})
    rows, total = run(cfg)
    os.makedirs(os.path.dirname(cfg.out) or ".", exist_ok=True)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m", "k", "ambient", "kernel_rank", "rank_law", "g_rank", "equal", "elapsed_ms"])
        w.writerows(rows)
    bad = [r for r in rows if not r[7] or r[4] != r[5]]
    slowest = max(rows, key=lambda r: r[8])
    print(f"{len(rows)} cells in {total:.2f}s, largest ambient {max(r[3] for r in rows)}")
    print(f"slowest cell n={slowest[0]} m={slowest[1]} k={slowest[2]}: {slowest[8]} ms")
    print("all cells equal, rank law holds" if not bad else f"{len(bad)} bad cells: {bad}")
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
