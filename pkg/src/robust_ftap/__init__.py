"""Exact-rational certificates for robust no-arbitrage on finite sample spaces."""

__version__ = "0.1.0"
