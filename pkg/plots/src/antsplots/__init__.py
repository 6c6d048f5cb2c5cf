"""Figure generation for collective-search sweep CSVs."""

from .figures import (
    CSV_COLUMNS,
    FIGURE_KINDS,
    FigureSpec,
    PlotError,
    Point,
    RenderResult,
    Series,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "FIGURE_KINDS",
    "FigureSpec",
    "PlotError",
    "Point",
    "RenderResult",
    "Series",
    "render",
    "__version__",
]
