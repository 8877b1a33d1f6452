"""movelit: deterministic motion-driven data-literacy game engine."""

__version__ = "0.1.0"
