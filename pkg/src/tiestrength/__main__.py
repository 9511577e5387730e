#!/usr/bin/env python
"""tiestrength package entry point."""

import sys

from tiestrength.cli import main

if __name__ == "__main__":
    sys.exit(main())
