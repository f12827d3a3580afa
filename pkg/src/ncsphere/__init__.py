"""Exact verification of the instanton constructions on theta-deformed and quantum symplectic spheres."""

__version__ = "0.1.0"

REPORT_SCHEMA = "ncsphere.report/1"
