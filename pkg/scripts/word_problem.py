"""Fraction of random words in x0, x1 that are trivial, by length, and tree-pair sizes."""

import argparse
import json
import random
from dataclasses import asdict, dataclass

from thompson.acceptance import X0_PAIR, X1_PAIR
from thompson.treepair import TreePair


@dataclass
class Config:
    samples: int = 2000
    max_length: int = 30
    seed: int = 7


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    gens = {1: X0_PAIR, -1: X0_PAIR.inverse(), 2: X1_PAIR, -2: X1_PAIR.inverse()}
    rows = {}
    for length in range(2, cfg.max_length + 1, 2):
        trivial, leaves = 0, 0
        for _ in range(cfg.samples // (cfg.max_length // 2)):
            p = TreePair.identity()
            for _ in range(length):
                p = p * gens[rng.choice((1, -1, 2, -2))]
            trivial += p.is_identity()
            leaves += p.leaves
        n = cfg.samples // (cfg.max_length // 2)
        rows[length] = {"trivial_fraction": trivial / n, "mean_reduced_leaves": leaves / n}
    return {"config": asdict(cfg), "by_length": rows}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    print(json.dumps(run(Config(**vars(parser.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
