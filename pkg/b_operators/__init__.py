"""Exact arithmetic for B-operators on fields of characteristic p.

Finite algebras and their companionability, operators on rational function
fields and p-th root towers, prolongation spaces and kernel checks.
"""

__version__ = "0.1.0"
