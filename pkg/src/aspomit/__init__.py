"""Omission-based abstraction for ground answer-set programs."""
__version__ = "0.1.0"
