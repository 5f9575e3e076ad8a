import sys
from pathlib import Path

# shared generators live next to the tests
sys.path.insert(0, str(Path(__file__).parent))
