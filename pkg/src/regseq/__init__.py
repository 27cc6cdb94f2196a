"""Single-pass instruction sequences over Boolean registers."""

__version__ = "0.1.0"
