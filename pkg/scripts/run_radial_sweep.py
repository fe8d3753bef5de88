#!/usr/bin/env python3
"""Radial (s-wave) delay sweep over scattering length and packet width."""
import sys

from zrdelay.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "radial", "--out", "results", "--jobs", "4",
                   *sys.argv[1:]]))
