"""Metrics, discounting, generators and the axiom harness."""
