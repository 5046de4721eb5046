"""Exhaustive associativity check of PBW multiplication in U(witt).

For every triple of monomials with letters in [-1, top] and length <= L,
(ab)c == a(bc). Slow for L = 3; it is also run as a `slow` test.

    python3 scripts/pbw_associativity.py --top 2 --length 2
"""
import argparse
import time
from itertools import combinations_with_replacement, product

from hlcy.liealg import U_WITT
from hlcy.words import Chain


def monomials(top, length):
    letters = range(-1, top + 1)
    return [m for L in range(0, length + 1) for m in combinations_with_replacement(letters, L)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--top", type=int, default=2)
    ap.add_argument("--length", type=int, default=2)
    args = ap.parse_args()
    ms = monomials(args.top, args.length)
    t0 = time.monotonic()
    bad = 0
    for a, b, c in product(ms, repeat=3):
        A, B, C = Chain.word(a), Chain.word(b), Chain.word(c)
        if U_WITT.multiply(U_WITT.multiply(A, B), C) != U_WITT.multiply(A, U_WITT.multiply(B, C)):
            bad += 1
            print("non-associative:", a, b, c)
    print(f"{len(ms)**3} triples, {bad} failures, {time.monotonic() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
