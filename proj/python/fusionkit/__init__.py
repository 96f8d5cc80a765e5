"""Exact fusion rules for Virasoro and Heisenberg modules via contracted
tensor products."""

from _fusionkit import blocks, fusion, odot, selftest, zhu

__all__ = ["blocks", "fusion", "odot", "selftest", "zhu"]
