"""Desk-scale acoustic tactile skin workbench: sensor surrogate, force calibration, grip control."""

__version__ = "0.1.0"
