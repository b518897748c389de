"""Caption-to-QA data synthesis toolkit."""

__version__ = "0.1.0"
