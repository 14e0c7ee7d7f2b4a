"""Pulse-level VQE laboratory for coherent measurement-rotation errors."""

__version__ = "0.1.0"
