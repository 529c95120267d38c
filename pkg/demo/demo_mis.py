#!/usr/bin/env python3
"""
Demo script to show an MIS of the k-mer space in action.
Computes one small set, verifies it and looks a few k-mers up.
"""

import sys
import os
# Add parent directory to path so we can import kmermis
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from kmermis import build_mapping, encode, edit_full, run_bfs_mis, verify_mis


def demo_mis(k: int = 8, d: int = 2):
    """Compute, verify and query the MIS for one (k, d) cell."""
    print("k-mer MIS Demo")
    print("=" * 30)
    print(f"🔄 Computing the MIS of all {4 ** k:,} {k}-mers with d={d}...")

    result = run_bfs_mis(k, d)
    print(f"✅ {len(result):,} members; the first five are:")
    for kmer in result.strings()[:5]:
        print(f"   {kmer}")

    report = verify_mis(result)
    print(f"🔍 Independent: {report.independent}, maximal: {report.maximal} ({report.mode})")

    table = build_mapping(result)
    sizes = table.cluster_sizes()
    print(f"🧩 Cluster sizes: min {sizes.min()}, max {sizes.max()}, mean {sizes.mean():.1f}")

    print("\nLooking up a few k-mers:")
    for query in ("ACGTACGT"[:k], "GATTACAG"[:k], "TTTTTTTT"[:k]):
        code = encode(query)
        member = table.lookup(code)
        print(f"   {query} -> {member.to_string()} (distance {edit_full(code, member)})")

    print("\n🎉 Demo completed!")


if __name__ == "__main__":
    demo_mis()
