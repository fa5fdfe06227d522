SMALL_DEFORMATION = 1e-8

DEFAULT_DIMENSION_CAP = 100_000

IDENTITY_TOLERANCE = 1e-12
DEFAULT_CHECK_TOLERANCE = 1e-10
DEFAULT_MARGIN = 2

POLYAD_LEAKAGE_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-10
ASSIGNMENT_TIE_TOLERANCE = 1e-12

JACOBI_RELATIVE_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 100

MAX_Q_SERIES_ORDER = 3
MAX_SYMMETRIC_SERIES_ORDER = 2

FIT_MAX_ITERATIONS = 500
FIT_FTOL = 1e-12
FIT_XTOL = 1e-12
FIT_JACOBIAN_STEP = 1e-6
FIT_INITIAL_DAMPING = 1e-3
FIT_DAMPING_UP = 10.0
FIT_DAMPING_DOWN = 10.0
FIT_MAX_DAMPING = 1e16
FIT_COLLINEARITY = 0.999
FIT_GRADIENT_TOLERANCE = 1e-6
FIT_DEFAULT_TAU = 0.1

OUTPUT_SIGNIFICANT_DIGITS = 15

DEFAULT_SERIES_ORDER = 1
DEFAULT_SEED = 0

MORSE_CHECK_T = 0.01
MORSE_CHECK_N_MAX = 3
MORSE_BOUND = 1e-3
MORSE_ORDER_RATIO = 100.0
MORSE_ORDER_TOLERANCE = 0.02
ANHARMONICITY_RATIO_TOLERANCE = 5e-4
GENERALIZED_CHECK_C = (0.01, -0.02)
