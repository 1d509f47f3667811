"""Temperley-Lieb categories at odd roots of unity and their functor to quantum group modules."""

__version__ = "0.1.0"
