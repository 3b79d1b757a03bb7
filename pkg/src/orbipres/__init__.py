"""Presentations of G(d,d,n) and its braid group from tagged triangulations of
a disk with one cone point."""

__version__ = "0.1.0"
