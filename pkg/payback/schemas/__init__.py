"""Pydantic schemas for reports, witnesses and input documents."""
