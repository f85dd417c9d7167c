"""Flight dynamics, guidance and interception statistics for a maneuvering reentry vehicle."""

__version__ = "0.1.0"
