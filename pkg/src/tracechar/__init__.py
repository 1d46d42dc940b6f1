"""Equidistribution of Tr(g^k) and short character sums over F_q[T]."""

__version__ = "0.1.0"
