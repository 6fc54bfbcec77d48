"""Character codegrees of finite groups and the prime graphs built from them."""

__version__ = "0.1.0"
