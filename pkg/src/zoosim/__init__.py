"""zoosim: desk-scale embodied-AI simulation stack."""

__version__ = "0.1.0"
