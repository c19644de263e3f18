"""Sweep the subscale grid and show how it partitions into the four styles.

Run: python3 demos/style_map.py
"""

from __future__ import annotations

import itertools
from collections import Counter

from conflictcoach import SubscaleScores, classify_style

VALUES = [x / 2 for x in range(2, 11)]  # 1.0 .. 5.0 in half steps


def main() -> None:
    counts = Counter()
    for combo in itertools.product(VALUES, repeat=6):
        counts[classify_style(SubscaleScores(*combo))] += 1
    total = sum(counts.values())
    print(f"{total} grid points across six subscales at 0.5 steps\n")
    for style, count in counts.most_common():
        bar = "#" * round(40 * count / total)
        print(f"{style.value:<12} {count:>7} ({count / total:6.1%}) {bar}")

    print("\nslice: varying domination and avoidance, everything else at 3.0")
    print("        avoidance ->")
    header = "dom     " + " ".join(f"{v:>4.1f}" for v in VALUES)
    print(header)
    for dom in VALUES:
        row = []
        for av in VALUES:
            style = classify_style(SubscaleScores(3.0, av, 3.0, 3.0, dom, 3.0))
            row.append(style.value[:4].lower())
        print(f"{dom:>4.1f}    " + " ".join(f"{cell:>4}" for cell in row))


if __name__ == "__main__":
    main()
