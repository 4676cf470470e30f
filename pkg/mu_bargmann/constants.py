"""
This file just provides constants that are shared across project
"""
from pathlib import Path

CONFIG_YAML_FILE = str(Path(__file__).with_name("config.yaml"))
CONFIG_ENV_VAR = "MU_BARGMANN_CONFIG"
ENV_PREFIX = "MU_BARGMANN"

SERIES_TAIL_TOL = 1e-14
MAX_SERIES_TERMS = 20000
E_MU_SERIES_RADIUS = 2.0
K_SWITCHOVER = 8.0
INTEGER_ORDER_GAP = 1e-3
RICHARDSON_OFFSETS = (0.1, 0.05, 0.025, 0.0125)
SMALL_ARGUMENT = 1e-50
RADIAL_BREAKPOINTS = (1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)
OUTER_SHELLS = (0.8, 0.9, 1.0)

ENTROPY_FLOOR = 1e-300
FD_STEPS = (1e-2, 5e-3, 2.5e-3)
DERIVATIVE_ABS_TOL = 1e-4
DERIVATIVE_ERR_FACTOR = 50.0
HT_TAIL_REL_TOL = 1e-3
GRAM_TOL = 1e-7
LEMMA_REL_TOL = 1e-12
UNIT_NORM_TOL = 1e-12

# (p, q, lambda) with integer-friendly inverse indices, all inside the admissible region
DEFAULT_ADMISSIBLE_SAMPLE = (
    (4.0, 1.0, 1.0),
    (3.0, 1.0, 1.0),
    (2.0, 1.0, 1.0),
    (2.0, 2.0, 2.0),
    (3.0, 2.0, 1.5),
    (2.5, 1.0, 2.0),
)
# (p, q, lambda) with q > 2 lambda, outside the admissible region
DEFAULT_DIVERGENT_SAMPLE = ((4.0, 3.0, 1.0), (4.0, 4.0, 1.5), (3.0, 5.0, 2.0))
DEFAULT_MUS = (0.0, 0.5, 1.0)
DEFAULT_S_VALUES = (0.0, 0.5, 1.0)
DEFAULT_THETAS = (1.5, 3.0, 4.0)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_TOLERANCE = 3
