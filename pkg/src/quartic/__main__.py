"""
Entry point for running Quartic CLI as a module.

This allows users to run: python -m quartic
"""

from quartic.cli import app

if __name__ == "__main__":
    app()
