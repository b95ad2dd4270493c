"""Exact construction and certification of asymptotic root sites of the
tenth degree cuboid polynomial along cubic parabolas."""

__version__ = "0.1.0"
