"""
Quartic CLI - numerical toolkit for the quartic extension of quantum theory.

This package provides extended states, extended measurements, quantum maps
and supermaps, together with reproducible verification suites for their
majorization and reduction properties.
"""

__version__ = "0.1.0"
__author__ = "Quartic Contributors"

from quartic.cli import app

__all__ = ["app", "__version__"]
