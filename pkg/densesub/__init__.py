"""
DenseSub - Main Package
=======================

Supersaturation counters, goodness classification, randomized splitting,
layered BFS extraction and degree-class regularization.
"""

from .constants import APP_NAME, APP_VERSION, ARTIFACT_HEADER, GENERATOR_ID
