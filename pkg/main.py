#!/usr/bin/env python3
"""
kmermis - Maximal Independent Sets of the k-mer Space
=====================================================

Main entry point for the kmermis command line.

Usage:
    python main.py compute -k 8 -d 2 --out mis_k8_d2.txt --mapping mis_k8_d2.map
    python main.py verify mis_k8_d2.txt
    python main.py table --k-max 8
    python main.py lookup --mis mis_k8_d2.txt --mapping mis_k8_d2.map ACGTACGT

For the library API:
    from kmermis import run_bfs_mis, verify_mis
    result = run_bfs_mis(8, 2)
"""

import sys

if __name__ == "__main__":
    from kmermis.cli import main
    sys.exit(main())
