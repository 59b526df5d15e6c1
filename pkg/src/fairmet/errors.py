"""Shared exception base.

Every package-specific exception derives from FairmetError so the CLI can
map "our" failures to exit code 1 and let genuine bugs surface as tracebacks.
"""


class FairmetError(Exception):
    pass
