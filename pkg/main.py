#!/usr/bin/env python3
"""
DenseSub
========

Command-line toolkit for supersaturation counting and small dense subgraph
extraction.

Usage:
    python main.py extract --in graph.txt --mode even --t 2 --r 2 --theta 2
"""

import sys

from densesub.cli import main


if __name__ == "__main__":
    sys.exit(main())
