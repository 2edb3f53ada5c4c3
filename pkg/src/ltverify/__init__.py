"""Certified numerics for Lieb-Thirring constants on spheres and tori."""

__version__ = "0.1.0"
