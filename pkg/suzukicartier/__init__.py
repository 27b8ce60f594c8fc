"""Cartier operator on Suzuki curves over GF(2^(2m+1))."""

__version__ = "0.1.0"
