"""Entropy plateau density and growth rate vs perturbation strength."""

import sys

from ._script import run


def main(argv=None) -> int:
    return run(
        "s2_plateau_growth",
        "plateau density and growth rate with dashed predictions",
        "renyi _plateau CSV, then the _growth CSV",
        argv,
    )


if __name__ == "__main__":
    sys.exit(main())
