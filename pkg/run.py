#!/usr/bin/env python3
"""
Command-line runner for the Hochschild curve toolkit.
Resource caps come from HOCHCURVE_* environment variables or the repository .env file.
"""
import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
