import math

SERVICE_NAME = "kicked_harper"

TWO_PI = 2.0 * math.pi
# |s''(1/4)| for s(x) = sin(2*pi*x)
KAPPA = 4.0 * math.pi**2

# harper-core
EIGEN_TOL = 1e-9

# orbits
CROSSING_TOL = 1e-9
CROSSING_VERIFY_TOL = 1e-6
QUADRATURE_GRID = 64

# rotset
HAUSDORFF_DIRECTIONS = 720
COLLINEAR_TOL = 1e-12
SYMMETRY_TOL = 1e-9
DEFAULT_ORBITS = 256
DEFAULT_ORBIT_ITERS = 100_000

# diffusion
DEFAULT_SEEDS = 32
DEFAULT_ITERS = 100_000
DISPLACEMENT_THRESHOLD = 1.0
CSV_HEADER = ("alpha", "beta", "verdict", "dx_max", "dy_max", "iters", "seeds")

# certify
GUARD = 1.0 + 2.0**-40
VAR_WINDOWS = 1000
VAR_REFINE = 1000
BETA_PLUS_CONSTANT = 8.0 / math.pi

# flows
FLOW_MAX_STEPS = 1 << 20

# cli
THREADS_ENV = "HARPER_THREADS"
EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_USAGE = 2
