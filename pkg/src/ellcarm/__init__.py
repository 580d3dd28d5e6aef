"""Elliptic Carmichael numbers: componentwise tests, witness curves, and
counting experiments around their (non-)existence.
"""

__version__ = "0.1.0"
