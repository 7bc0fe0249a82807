"""
Configuration settings for the Jacobian algebra Betti engine
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Get the directory where this config file is located
_CONFIG_DIR = Path(__file__).parent.absolute()

# Load environment variables from .env file
load_dotenv()

# Coefficient field settings
DEFAULT_FIELD = os.getenv("BETTI_FORGE_FIELD", "q")  # 'q' for exact rationals, 'fp:<p>' for a prime field
DEFAULT_PRIME = 32003  # Prime used by 'fp' when no modulus is given
# Betti numbers over GF(p) can only be >= the rational ones, so modular runs are flagged in reports

# Variable names
SURFACE_VARIABLES = ("x", "y", "z", "t")  # Ring S of the surface case
CURVE_VARIABLES = ("x", "y", "z")  # Ring R of the plane curve case

# Report settings
REPORT_SCHEMA = "betti-forge/1"  # Stable JSON schema tag
OUTPUT_DIR = os.getenv("BETTI_FORGE_OUTPUT_DIR", "outputs")  # Where bare --json file names are written

# Verification settings
VERIFY_INVARIANTS = os.getenv("BETTI_FORGE_VERIFY", "1") != "0"  # Composition / minimality / exactness checks
HILBERT_MARGIN = 2  # Hilbert scans run up to max shift + margin

# Corpus settings
CORPUS_MAX_WORKERS = int(os.getenv("BETTI_FORGE_WORKERS", "4"))  # Process pool size for corpus runs
CORPUS_DIR = str(_CONFIG_DIR / "corpus")  # Expression files shipped with the corpus

# Hypothesis limits
NODAL_MIN_DEGREE = 5  # Nodal mdr bound needs d >= 5
PENCIL_VERIFIED_M = (2, 3, 4)  # Pencil powers checked computationally; larger m is untested
