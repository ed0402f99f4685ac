"""OTOC series figure with dashed late-time plateaus (one input per q)."""

import sys

from ._script import run


def main(argv=None) -> int:
    return run(
        "otoc",
        "OTOC vs time, one curve per input file, dashed plateau references",
        "one otoc CSV per local dimension (repeatable)",
        argv,
    )


if __name__ == "__main__":
    sys.exit(main())
