import sys
from pathlib import Path

# make `import helpers` work regardless of invocation directory
sys.path.insert(0, str(Path(__file__).parent))
