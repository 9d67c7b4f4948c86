"""pebblebound project constants."""

# Interchange files
SCHEMA_VERSION = 1

# Graph core
ORBIT_VERTEX_CAP = 16
AUTOMORPHISM_LIMIT = 5040

# Oracle
ORACLE_VERTEX_CAP = 12
ORACLE_NODE_BUDGET = 10**8
ORACLE_ANTICHAIN_LIMIT = 64  # known maximal unsolvable / minimal solvable states kept per root credit
UNSOLVABLE_LIMIT = 500

# Enumeration policy defaults (zero disables a family)
A2_MAX_SET_SIZE = 3
A2_MAX_ETA = 2
A3_MAX_S_SIZE = 3
A3_MAX_T_SIZE = 2
A5_MAX_STAR = 4
B3_PATHS_PER_ROOT = 1

# Root search
DEFAULT_GAP_SCHEDULE = ("0.1", "0.05", "0")
GAPPED_TIME_LIMIT = 600.0

# Solvers
SOLVER_ENV_VAR = "PEBBLEBOUND_SOLVER"
SOLVER_PREFERENCE = ("highs", "cbc", "scip", "gurobi")
INTEGRALITY_TOLERANCE = 1e-6
ABSOLUTE_GAP_AT_ZERO = 0.999

# Workspace
DEFAULT_WORKDIR = ".pebblebound"
CACHE_FOLDER_NAME = "cache"
REPORTS_FOLDER_NAME = "reports"

# Reproduction harness
REPRODUCE_ORACLE_PI_CAP = 16  # base graphs with larger printed pi are not re-derived by the oracle
