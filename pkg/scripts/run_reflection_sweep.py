#!/usr/bin/env python3
"""Reflection-delay width sweep (dispersionless, fixed evaluation time).

Dumps the narrowest reflected packet alongside its one-sided exponential
limiting form.  Extra CLI flags pass through.
"""
import sys

from zrdelay.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "fig6", "--out", "results", "--jobs", "4",
                   "--dump-waves", *sys.argv[1:]]))
