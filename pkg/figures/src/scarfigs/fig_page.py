"""Entropy-density profile (Page-style curve) per perturbation strength."""

import sys

from ._script import run


def main(argv=None) -> int:
    return run(
        "page",
        "entropy density vs subsystem fraction",
        "renyi _page CSV",
        argv,
    )


if __name__ == "__main__":
    sys.exit(main())
