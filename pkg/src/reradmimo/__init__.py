"""MIMO capacity under molecular absorption and re-radiation in mmWave/THz bands."""

__version__ = "0.1.0"
