"""Half-chain entropy growth figure."""

import sys

from ._script import run


def main(argv=None) -> int:
    return run(
        "s2_vs_t",
        "half-chain Renyi-2 entropy vs time per perturbation strength",
        "renyi _s2_vs_t CSV",
        argv,
    )


if __name__ == "__main__":
    sys.exit(main())
