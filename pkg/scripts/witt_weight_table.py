"""Homology dimensions of the Witt algebra, one row per weight.

Prints CE (Lambda) and Leibniz (CL) homology for each weight in a range,
degrees 0..max-1. Uses the same cell machinery as the CLI, so --jobs works.

    python3 scripts/witt_weight_table.py --weights -2..3 --max-degree 4
"""
import argparse

from hlcy.complexes import build_slice, homology, make_complex
from hlcy.grid import parallel_map
from hlcy.liealg import WITT


def cell(args):
    name, wt, top = args
    s = build_slice(make_complex(name, WITT), wt, range(0, top + 2))
    h = homology(s, reps=False)
    return [h.degrees[n].dim for n in range(0, top + 1)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--weights", default="-2..3")
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("-j", "--jobs", type=int, default=None)
    args = ap.parse_args()
    lo, hi = map(int, args.weights.split(".."))
    cells = [(c, w, args.max_degree) for w in range(lo, hi + 1) for c in ("lie", "leibniz")]
    res = dict(zip(cells, parallel_map(cell, cells, args.jobs)))
    print(f"{'weight':>6}  {'H^Lie_n':<20}  HL_n")
    for w in range(lo, hi + 1):
        lie = res[("lie", w, args.max_degree)]
        hl = res[("leibniz", w, args.max_degree)]
        print(f"{w:>6}  {str(lie):<20}  {hl}")


if __name__ == "__main__":
    main()
