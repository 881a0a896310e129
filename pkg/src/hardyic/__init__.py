"""Hardy and Cabello nonlocality under the Information Causality criterion."""

__version__ = "0.1.0"
