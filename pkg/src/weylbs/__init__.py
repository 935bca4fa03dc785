"""Exact computations with (sandwich) Bernstein-Sato functional equations
over rings of differential operators on polynomial and monomial subrings."""

__version__ = "0.1.0"
