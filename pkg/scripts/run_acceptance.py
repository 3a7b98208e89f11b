#!/usr/bin/env python3
"""Run the full acceptance grid from the command line (same as `arrkit acceptance`)."""

import sys

from arrkit.cli import main

if __name__ == "__main__":
    sys.exit(main(["acceptance"] + sys.argv[1:]))
