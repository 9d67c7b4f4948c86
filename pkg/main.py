#!/usr/bin/env python3
"""
pebblebound - pebbling oracles and IP upper bounds for Cartesian product graphs
"""

from pebblebound.cli import main

if __name__ == "__main__":
    main()
