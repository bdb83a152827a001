"""How deep does the descending witness search in F go?

For random conjugator sets K, record the accepted index j of the base
generator and compare it with the germ data of the conjugators.
"""

import argparse
import collections
import json
import random
from dataclasses import asdict, dataclass

from thompson.treepair import random_element
from thompson.witness import search_cap, witness_in_F


@dataclass
class Config:
    trials: int = 200
    max_leaves: int = 25
    max_size: int = 4
    seed: int = 1


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    depths = collections.Counter()
    slack = []
    for _ in range(cfg.trials):
        K = [random_element(rng.randint(1, cfg.max_leaves), rng.randrange(2 ** 32)).to_plmap()
             for _ in range(rng.randint(1, cfg.max_size))]
        j = witness_in_F(K).extra["index"]
        depths[j] += 1
        slack.append(j - search_cap(K))
    return {"config": asdict(cfg),
            "index_histogram": dict(sorted(depths.items())),
            "min_distance_to_cap": min(slack)}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = Config(**vars(parser.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
