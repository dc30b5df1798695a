"""Correlated N-photon ladder algebra, transition selection rules,
photon-budget feasibility and few-level dynamics."""

__version__ = "0.1.0"
