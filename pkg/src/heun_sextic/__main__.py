"""Allow `python -m heun_sextic`."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
