"""Transition pathways for a sector-coupled energy system with a chemical industry."""

__version__ = "0.1.0"
