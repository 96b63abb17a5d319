"""Time BLEU, chrF++, TER and Fuzz over a synthetic corpus of ~25-token pairs.

References are synthetic forecast sentences joined to about 25 tokens.
Hypotheses perturb them the way a back-translation drifts: a few word
substitutions, a dropped word and a moved block.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from wxtrans.metrics import MetricConfig, score_pair
from wxtrans.pipeline.synth import generate_synthetic, load_templates

_SUBSTITUTES = ["storm", "showers", "breezy", "expected", "around", "near", "likely", "possible", "the", "and"]


def make_pairs(n: int, tokens: int = 25, seed: int = 0) -> list[tuple[str, str]]:
    rng = random.Random(seed)
    pool = generate_synthetic(load_templates(), 200, seed=seed)
    pairs = []
    for _ in range(n):
        words: list[str] = []
        while len(words) < tokens:
            words.extend(rng.choice(pool).split())
        ref = words[:tokens]
        hyp = list(ref)
        for _ in range(rng.randint(0, 5)):
            hyp[rng.randrange(len(hyp))] = rng.choice(_SUBSTITUTES)
        if rng.random() < 0.5:
            del hyp[rng.randrange(len(hyp))]
        if rng.random() < 0.5:
            i = rng.randrange(len(hyp) - 3)
            block = hyp[i : i + 3]
            del hyp[i : i + 3]
            j = rng.randrange(len(hyp) + 1)
            hyp[j:j] = block
        pairs.append((" ".join(hyp), " ".join(ref)))
    return pairs


def run(n: int = 10_000, tokens: int = 25, seed: int = 0) -> float:
    """Seconds spent scoring ``n`` pairs (pair generation excluded)."""
    pairs = make_pairs(n, tokens, seed)
    cfg = MetricConfig()
    start = time.perf_counter()
    for hyp, ref in pairs:
        score_pair(hyp, ref, cfg)
    return time.perf_counter() - start


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=10_000)
    ap.add_argument("--tokens", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    secs = run(args.pairs, args.tokens, args.seed)
    print(f"{args.pairs} pairs x {args.tokens} tokens: {secs:.2f} s ({1000 * secs / args.pairs:.2f} ms/pair)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
