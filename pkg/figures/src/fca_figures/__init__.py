"""Figure rendering for wiretap-fca sweep CSVs."""

from .render import (
    EmptyInputError,
    FigureSpec,
    KINDS,
    NamedColumnError,
    parse_spec,
    render,
    series_means,
)

__version__ = "0.1.0"

__all__ = [
    "EmptyInputError",
    "FigureSpec",
    "KINDS",
    "NamedColumnError",
    "parse_spec",
    "render",
    "series_means",
    "__version__",
]
