"""Allow `python -m fneighbors` to run the command-line interface."""

import sys

from .cli_io.main import main

if __name__ == "__main__":
    sys.exit(main())
