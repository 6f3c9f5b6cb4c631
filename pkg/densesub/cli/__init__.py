"""
DenseSub - CLI Package
======================

Command-line surface for the DenseSub experiments.
"""

from .app import CommandLineApp, main
