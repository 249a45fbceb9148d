"""Projection-correction reconstruction of signals and images from non-uniform Fourier data."""

__version__ = "0.1.0"
