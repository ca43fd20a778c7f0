"""Sweep the ball-displacement oracle radius and report how often it
certifies the Britton translation length on random words.

Usage: python3 scripts/oracle_agreement.py [--words N] [--maxlen L] [--seed S]
"""

import argparse
from dataclasses import dataclass

import splittings as sp
from splittings import graph


@dataclass(frozen=True)
class SweepConfig:
    words: int = 200
    maxlen: int = 8
    seed: int = 0
    radii: tuple = (2, 4, 6, 8, 10, 12)


def example_graphs():
    m3 = graph(
        ("u", "v"),
        (("e", "u", "u", 2, 3), ("ep", "v", "v", 2, 3), ("f", "u", "v", 2, 2)),
    )
    return (
        ("BS(1,2)", sp.validate_graph(sp.bs(1, 2))),
        ("BS(2,3)", sp.validate_graph(sp.bs(2, 3))),
        ("M3", sp.validate_graph(m3)),
    )


def main(cfg):
    print(f"{'graph':>8} {'radius':>6} {'valid':>6} {'agree':>6} {'words':>6}")
    for name, g in example_graphs():
        words = sp.sample_words(g, cfg.words, cfg.maxlen, seed=cfg.seed)
        for radius in cfg.radii:
            valid = agree = 0
            for w in words:
                ell = sp.translation_length(g, w)
                res = sp.ball_displacement_oracle(g, w, radius)
                if res.valid:
                    valid += 1
                    agree += res.value == ell
            print(
                f"{name:>8} {radius:>6} {valid:>6} {agree:>6} {len(words):>6}"
            )
            if valid and agree != valid:
                raise SystemExit("oracle disagreement on a certified word")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--words", type=int, default=200)
    ap.add_argument("--maxlen", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    main(SweepConfig(words=args.words, maxlen=args.maxlen, seed=args.seed))
