"""
DenseSub - Core Package
=======================

Business logic: graphs, counters, goodness, splitting, extraction and
regularization.
"""

from .errors import *
from .graph import Graph, generate, load_graph, dump_graph
from .extraction import Certificate, certify, extract
from .regularization import regularize
