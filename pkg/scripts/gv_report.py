"""Print the Godbillon-Vey pipeline checks with their witnesses.

    python3 scripts/gv_report.py [--cap 3]
"""
import argparse

from hlcy.maps import gv_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cap", type=int, default=3, help="length cap for the U-level evidence (0 = skip)")
    args = ap.parse_args()
    rep = gv_pipeline(cap_evidence=args.cap)
    for i, c in enumerate(rep.checks, 1):
        print(f"{i}. [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.anchor}")
        for k, v in c.witness.items():
            print(f"       {k} = {v}")
    print(f"{sum(c.passed for c in rep.checks)}/9 passed")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
