#!/usr/bin/env python3
"""
Command-line entry point for the invariant_info package

Usage:
    python scripts/invariant_info_cli.py report --input state.json
    python scripts/invariant_info_cli.py invariance --dim 3 --trials 500 --seed 42
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from invariant_info.cli import cli_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(cli_main(sys.argv[1:]))
