#!/usr/bin/env python3
"""Shape-classifier accuracy grid over the parametric generators.

Usage: python scripts/eval_classifier.py [--samples N] [--sigma F] [--seed N]
Prints a confusion table; noise sigma is a fraction of each stroke's
bounding-box diagonal.
"""

import argparse
import random
import sys
from collections import Counter

from deixis.strokegen import GENERATORS, add_noise
from deixis.strokes import ShapeClass, classify_shape, stroke_features


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--sigma", type=float, default=0.02)
    ap.add_argument("--seed", type=int, default=71)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    names = [c.value for c in ShapeClass]
    width = max(len(n) for n in names) + 1
    print("true \\ predicted".ljust(width + 2) + " ".join(n[:6].rjust(6) for n in names) + "    acc")
    failed = False
    for cls in ShapeClass:
        counts = Counter()
        for _ in range(args.samples):
            pts = add_noise(GENERATORS[cls](rng), rng, sigma_frac=args.sigma)
            counts[classify_shape(stroke_features(pts)).value] += 1
        acc = counts[cls.value] / args.samples
        failed |= acc < 0.95
        row = " ".join(str(counts[n]).rjust(6) for n in names)
        print(f"{cls.value.ljust(width + 2)}{row}  {acc:6.1%}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
