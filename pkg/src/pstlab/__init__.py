"""Weighted-path Hamiltonians with perfect state transfer."""
from .kernels import BACKEND
from .spectra import Kind, Spectrum

__all__ = ["BACKEND", "Kind", "Spectrum"]
__version__ = "0.1.0"
