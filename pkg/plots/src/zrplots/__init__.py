"""Rendering of scattering-delay sweep tables and packet-density dumps."""

__version__ = "0.1.0"
