"""Exact-arithmetic laboratory for alternating multilinear forms over prime
fields, with box-shattering and type-counting machinery at desk scale."""

__version__ = "0.1.0"
