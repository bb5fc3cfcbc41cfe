"""Desk-scale federation testbed: cellular-credential login for a fog
platform plus proxy-pulled and token-carried application state handover."""

__version__ = "0.1.0"
