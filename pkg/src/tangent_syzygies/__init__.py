"""Equations and bottom syzygies of secant varieties of osculating varieties,
by exact linear algebra."""

__version__ = "0.1.0"
