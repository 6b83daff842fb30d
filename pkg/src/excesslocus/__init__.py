"""Exact codimension bounds for excess intersection loci of form tuples,
with a finite-field enumeration lab to check them."""

__version__ = "0.1.0"
