"""Exact computations with Maurer-Cartan elements of DGLAs over Artinian cdgas."""

__version__ = "0.1.0"
