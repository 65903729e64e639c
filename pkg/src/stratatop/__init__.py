"""Exact chain-level models of stratified spaces, intersection spaces and signatures."""

__version__ = "0.1.0"
