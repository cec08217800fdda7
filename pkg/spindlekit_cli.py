#!/usr/bin/env python3
"""
Launcher for the spindlekit command line from a source checkout.
Usage: python spindlekit_cli.py check --property spherical-support -r 1 samples/circle12.json
"""
import sys
from pathlib import Path

# Run from a checkout without installing the package
sys.path.insert(0, str(Path(__file__).resolve().parent))

from spindlekit.cli import run_command

if __name__ == "__main__":
    sys.exit(run_command(sys.argv[1:]))
