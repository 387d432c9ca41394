"""Exact payback-period analytics for nonconventional cash flows."""

__version__ = "1.0.0"
