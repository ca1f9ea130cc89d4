"""lfcomb: polynomial combinations of L-functions and their off-strip zeros."""

__version__ = "0.1.0"
