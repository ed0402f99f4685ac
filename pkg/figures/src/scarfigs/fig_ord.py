"""Order-parameter relaxation figure: series panel plus rate-vs-lambda panel."""

import sys

from ._script import run


def main(argv=None) -> int:
    return run(
        "ord",
        "order-parameter relaxation: series + fitted rates",
        "order-param series CSV, then the _rates CSV",
        argv,
    )


if __name__ == "__main__":
    sys.exit(main())
