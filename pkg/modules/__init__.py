# modules/__init__.py

"""
This file makes the 'modules' directory a Python package.

It brings the command runner and the verification suites into the package's
top-level namespace, so main.py can write `from modules import CommandRunner`.
"""

from .commands import Command, CommandRunner, RunConfig
from .verification import Verifier, VerifySettings

__all__ = [
    "Command",
    "CommandRunner",
    "RunConfig",
    "Verifier",
    "VerifySettings",
]
