"""Weighted multiplicative relations between finite groups and their summation operators."""
