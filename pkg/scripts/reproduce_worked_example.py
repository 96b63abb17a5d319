"""Score the worked back-translation pairs and print the metric table.

Hypothesis is the back-translation, reference is the English original.
Pass ``--scorer SPEC`` to add COMET from an external neural scorer.
"""

from __future__ import annotations

import argparse
import sys

from wxtrans.metrics import ExternalScorer, classify, score_pair

SOURCE = "Tropical Weather Outlook"
PAIRS = {
    "Spanish": ("Perspectiva sobre las Condiciones del Tiempo en el Trópico",
                "Perspective on Weather Conditions in the Tropics"),
    "French": ("Prévisions météorologiques tropicales", "Tropical weather forecast"),
}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scorer", help="external scorer command or URL")
    args = ap.parse_args(argv)
    scorer = ExternalScorer.from_spec(args.scorer)
    print(f"{'':8} {'BLEU':>8} {'Fuzz':>5} {'chrF++':>8} {'COMET':>6} {'TER':>7}")
    for name, (machine, back) in PAIRS.items():
        s = score_pair(back, SOURCE, src=machine, scorer=scorer)
        comet = "-" if s.comet is None else f"{s.comet:.3f}"
        print(f"{name:8} {s.bleu:8.3f} {s.fuzz:5d} {s.chrf_pp:8.3f} {comet:>6} {s.ter:7.2f}")
        ratings = ", ".join(f"{k}={v.value}" for k, v in classify(s).items())
        print(f"{'':8} {ratings}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
