"""Domain types: projects, balances and discount functions."""
