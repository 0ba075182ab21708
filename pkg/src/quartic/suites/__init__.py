"""
Verification suites for Quartic CLI.

Each suite checks one family of numerical claims and reports a single
SuiteResultModel.
"""

from quartic.suites.base import Suite, SuiteContext, SuiteError, Tally
from quartic.suites.runner import ALL, SuiteRunner

__all__ = [
    "ALL",
    "Suite",
    "SuiteContext",
    "SuiteError",
    "SuiteRunner",
    "Tally",
]
