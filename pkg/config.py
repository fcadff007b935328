"""
Configuration File - Numerical Constants and Settings
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

PACKAGE_VERSION = "0.3.0"

# ==================== Quadrature Configuration ====================
# Relative tolerance for order-doubling quadrature checks (CLI --tolerance overrides)
QUAD_TOLERANCE = float(os.getenv("QUAD_TOLERANCE", "1e-8"))
GAUSS_LEGENDRE_ORDER = int(os.getenv("GAUSS_LEGENDRE_ORDER", "24"))
TIME_QUAD_ORDER = int(os.getenv("TIME_QUAD_ORDER", "32"))
QUAD_MAX_DOUBLINGS = int(os.getenv("QUAD_MAX_DOUBLINGS", "3"))

# ==================== Derivative Configuration ====================
# Cauchy-integral trapezoid rule on circles
CAUCHY_NODES = int(os.getenv("CAUCHY_NODES", "64"))
CAUCHY_RADIUS = float(os.getenv("CAUCHY_RADIUS", "0.25"))
CAUCHY_MAX_HALVINGS = int(os.getenv("CAUCHY_MAX_HALVINGS", "8"))
# Ridders extrapolation for real central differences
RIDDERS_STEP = float(os.getenv("RIDDERS_STEP", "1e-2"))

# ==================== Sup-Norm Configuration ====================
LINF_GRID = int(os.getenv("LINF_GRID", "16"))
LINF_MAX_REFINEMENTS = int(os.getenv("LINF_MAX_REFINEMENTS", "6"))
LINF_RELATIVE_STOP = float(os.getenv("LINF_RELATIVE_STOP", "1e-6"))

# ==================== Drilling Configuration ====================
DEFAULT_L0 = float(os.getenv("DEFAULT_L0", "0.9"))
# Smooth-case Nehari constant, only ever inserted on explicit request
SMOOTH_NEHARI_K = 1.5

# ==================== Decay Fit Configuration ====================
DECAY_SAMPLES = int(os.getenv("DECAY_SAMPLES", "8"))
DECAY_FIT_RESIDUAL = float(os.getenv("DECAY_FIT_RESIDUAL", "0.05"))

# ==================== Lamination Search Configuration ====================
SEARCH_POINTS = int(os.getenv("SEARCH_POINTS", "64"))
SEARCH_DIRECTIONS = int(os.getenv("SEARCH_DIRECTIONS", "64"))
SEARCH_OFFSETS = int(os.getenv("SEARCH_OFFSETS", "32"))
SEARCH_REFINE_TOP = int(os.getenv("SEARCH_REFINE_TOP", "10"))
EMBEDDING_LEVELS = int(os.getenv("EMBEDDING_LEVELS", "3"))

# ==================== File Configuration ====================
DRILL_SPEC_PATH = os.getenv("DRILL_SPEC_PATH", "./data/drill_spec.json")
LAMINATION_CORPUS_DIR = os.getenv("LAMINATION_CORPUS_DIR", "./data/laminations")
VERIFICATION_CHECKS_PATH = os.getenv(
    "VERIFICATION_CHECKS_PATH", "./data/verification_checks.json"
)
REPORT_OUTPUT_DIR = os.getenv("REPORT_OUTPUT_DIR", "./reports_out")

# ==================== UI Configuration ====================
EXAMPLE_SPECS = [
    {"label": "One short axis", "lengths": [0.01], "K": 1.5, "L0": 0.9},
    {"label": "Two axes", "lengths": [0.02, 0.005], "K": 1.5, "L0": 0.9},
    {"label": "Near threshold", "lengths": [0.5], "K": 2.0, "L0": 0.9},
]
