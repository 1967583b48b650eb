"""Exact computations for O_q(SL_2), the cogroupoid B(E,F) and bicovariant calculi."""

__version__ = "0.1.0"
