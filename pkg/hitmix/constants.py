# Conjugate gradient
CG_REL_TOL = 1e-10
CG_MIN_MAX_ITERS = 1000
CG_ITERS_PER_VERTEX = 10
CG_RESIDUAL_REFRESH = 50

# Moments
MOMENT_ORDER = 2
VARIANCE_CLAMP_TOL = 1e-6
# Moments closer than this (relative) count as identical
MOMENT_TIE_RTOL = 1e-8

# Mixture model
SAMPLES_PER_VERTEX = 25
G_CANDIDATES = [2, 3, 4, 5]
TAU = 0.5
EM_MAX_ITERS = 500
EM_REL_TOL = 1e-8
SIGMA2_FLOOR = 1e-8
MIN_COMPONENT_WEIGHT = 1e-12
MAX_COMPONENT_RESTARTS = 3
EM_MONOTONE_SLACK = 1e-10
ROW_SUM_TOL = 1e-12

# SBM benchmark
OUT_BLOCK_BUDGET = 0.05
SBM_GOAL_BLOCK = 0
SBM_G_CANDIDATES = [2]
REPORT_PERCENTILES = [0.05, 0.95]

# Outputs
MOMENTS_FILE = "moments.tsv"
MEMBERSHIP_FILE = "membership.tsv"
MEMBERSHIP_SIDECAR = "membership.json"
RUNS_FILE = "runs.csv"
SUMMARY_FILE = "summary.csv"
RELABEL_EDGES_FILE = "edges.txt"
RELABEL_MAPPING_FILE = "mapping.tsv"
RELABEL_SEEDS_FILE = "seeds.txt"

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
