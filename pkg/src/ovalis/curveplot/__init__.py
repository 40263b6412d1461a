"""Plots of the real part of a plane curve f(x, y) = 0."""
from .contour import DEFAULT_GRID, DEFAULT_WINDOW, ContourSet, marching_squares
from .polynomial import Polynomial, PolynomialSyntaxError, UnsupportedVariable, parse_polynomial
from .svg import render_svg

__all__ = [
    "ContourSet", "DEFAULT_GRID", "DEFAULT_WINDOW", "Polynomial", "PolynomialSyntaxError",
    "UnsupportedVariable", "marching_squares", "parse_polynomial", "render_svg",
]
