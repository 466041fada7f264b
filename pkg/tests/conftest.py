import sys
from pathlib import Path

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"

# repo-level directory for the optional converted published tables / fixtures
REPO_DATA_DIR = TESTS_DIR.parent / "data"

sys.path.insert(0, str(TESTS_DIR))
