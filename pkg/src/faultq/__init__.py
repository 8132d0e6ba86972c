"""Power-system fault diagnosis as a PUBO/Ising problem solved with simulated QAOA."""

__version__ = "0.1.0"
