"""Link families and homology invariants of knotted graph diagrams."""

__version__ = "0.1.0"
