#!/usr/bin/env python3
"""
Shell entry point for crystbox. See `crystbox.py --help` for the
subcommands (validate, analyze, cohomology, split, reduce, catalog).
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import sys

from crystbox.cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
