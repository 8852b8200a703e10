import sys
from pathlib import Path

# make tests/reference.py and friends importable
sys.path.insert(0, str(Path(__file__).parent))
