import sys
from pathlib import Path

# Tests import the top-level packages the way main.py does
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
