#!/usr/bin/env python3
"""Spin-clock pointer sweep: mean reading and transmission quenching vs resolution."""
import sys

from zrdelay.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "larmor", "--out", "results", "--jobs", "4",
                   *sys.argv[1:]]))
