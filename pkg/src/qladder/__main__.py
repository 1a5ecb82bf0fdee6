"""Allow ``python -m qladder`` to run the command-line interface."""

import sys

from .cli import main

sys.exit(main())
