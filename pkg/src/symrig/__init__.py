"""Symmetric planar rigidity from colored quotient graphs."""
