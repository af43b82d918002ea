"""Vacuum photon-pair production in time-modulated (epsilon-near-zero) media."""

__version__ = "0.1.0"
