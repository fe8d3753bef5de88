#!/usr/bin/env python3
"""Transmission-delay width sweep (both dispersion laws) with packet dumps.

Extra CLI flags pass through, e.g. --grid-scale 2 or --out elsewhere.
"""
import sys

from zrdelay.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "fig4", "--out", "results", "--jobs", "4",
                   "--dump-waves", *sys.argv[1:]]))
