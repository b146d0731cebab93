"""Exact computation of signature-defect invariants on Dehn-twist families,
knot signatures and infected homology cylinders."""

__version__ = "0.1.0"
