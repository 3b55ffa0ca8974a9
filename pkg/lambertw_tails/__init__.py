"""Lambert W x F distributions, IGMM/MLE estimation and tail-regime diagnostics."""

__version__ = "0.1.0"
