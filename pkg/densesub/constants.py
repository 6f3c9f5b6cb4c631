"""
DenseSub - Application Constants
================================

Contains all application constants, default values, and configuration definitions.
"""

# Application Information
APP_NAME = "DenseSub"
APP_VERSION = "1.0.0"

# Randomness
GENERATOR_ID = "pcg64/1"
ARTIFACT_HEADER = f"# densesub {APP_VERSION} generator {GENERATOR_ID}"

# File Configuration
CONFIG_FILE = "densesub.ini"
LOG_FILE = "densesub.log"
THREADS_ENV = "DN_THREADS"

# Language Configuration
DEFAULT_LANGUAGE = "en"
AVAILABLE_LANGUAGES = ["en", "vi"]

# Enumeration caps
CAP_AUX = 1_000_000          # C(n,t) or t-matching count for auxiliary graphs
CAP_BICLIQUE_SETS = 1_000_000
CAP_HST_VERTICES = 24        # host order for H_{s,t} subgraph enumeration
CAP_MATCHINGS = 1_000_000
CAP_EXPONENT_VERTICES = 10
CAP_ATLAS_VERTICES = 7

# Default Configuration Values
DEFAULT_CONFIG = {
    # General settings
    "log": "true",
    "log_file": LOG_FILE,
    "language": "en",
    "seed": "0",
    "threads": "1",

    # Caps
    "cap_aux": str(CAP_AUX),
    "cap_hst_vertices": str(CAP_HST_VERTICES),
    "cap_matchings": str(CAP_MATCHINGS),

    # Splitting / extraction
    "max_attempts": "20",
}

# Commands
COMMANDS = ["gen", "count", "goodness", "split", "extract", "regularize",
            "verify", "exponent", "bench"]

# Generator kinds
GENERATOR_KINDS = ["gnp", "gnm", "complete", "complete_bipartite", "cycle",
                   "hypercube_q3", "h_st", "path", "star", "empty",
                   "bipartite_gnp", "bipartite_gnm"]

# Counted structures
STRUCTURES = ["star_t", "biclique_tt", "t_matching", "cherry_A", "cherry_B",
              "c4", "h_1t", "spider_t", "h_st"]

# Extraction outcomes
OUTCOMES = ["certified", "no_top_good_structure", "split_failed",
            "case2_exhausted", "caps_exceeded"]

# CSV column orders
COUNT_COLUMNS = ["structure", "t", "n", "m", "count", "bound_num", "bound_den",
                 "hypotheses_met"]
SPLIT_COLUMNS = ["level", "class", "structure_id", "family_size", "theta", "pass"]
BENCH_COLUMNS = ["n", "m", "t", "r", "seed", "outcome", "certificate_order",
                 "certificate_min_or_avg_degree", "certificate_radius",
                 "wall_time_ms"]
