"""Computations in Kauffman bracket skein modules of F x I for the disk, annulus and torus."""
from .rings import (
    A,
    A_INV,
    DELTA,
    HValuation,
    LaurentPolynomial,
    TruncatedSeries,
    expand_laurent,
    h_valuation,
)
from .diagram import (
    Diagram,
    DiagramError,
    DiagramParseError,
    Multicurve,
    SurfaceKind,
    build_product_diagram,
    closed_braid,
    mirror,
    parse_diagram,
    trace_state,
    classify_state,
)
from .statesum import get_backend

__version__ = "0.1.0"
