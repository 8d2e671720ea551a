#!/usr/bin/env python3
"""Print the n/d/ratio comparison tables for k = 4, 6, 8.

Every distance is recomputed by brute force over all nonzero messages, so
this doubles as a regression check on the construction code.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from simplexor.metrics import comparison_table, format_table_text


def main() -> None:
    for k in (4, 6, 8):
        print(f"k = {k}")
        print(format_table_text(comparison_table(k)))
        print()


if __name__ == "__main__":
    main()
