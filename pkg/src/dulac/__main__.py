"""Allow `python -m dulac` as an alternative to the installed script."""

import sys

from dulac.cli import main

if __name__ == "__main__":
    sys.exit(main())
