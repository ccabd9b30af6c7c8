"""
FrozenTime - CLI Module

Command-line entry point:
- simulate, certify, compare, bound and gen-example subcommands
- Batch runs over repeated --scenario flags
- Exit codes 0 (ok), 1 (input error), 2 (divergence), 3 (condition fails)
"""

from .main import EXIT_DIVERGED, EXIT_FAILS, EXIT_INPUT, EXIT_OK, build_parser, main, most_severe

__all__ = [
    "EXIT_OK",
    "EXIT_INPUT",
    "EXIT_DIVERGED",
    "EXIT_FAILS",
    "build_parser",
    "main",
    "most_severe",
]
