"""Reduced dynamics of bipartite quantum systems with initial correlations,
and the test for which joint dynamics keep the Kraus form for every
correlation."""

__version__ = "0.1.0"
