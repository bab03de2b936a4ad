"""Publication-style figure rendering for pagecurve simulation outputs."""

from .figures import FigureSpec, build_figure, render, render_all, spec_from_run
from .reader import PlotsError, RunData, read_run, read_series_csv

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FigureSpec",
    "PlotsError",
    "RunData",
    "build_figure",
    "read_run",
    "read_series_csv",
    "render",
    "render_all",
    "spec_from_run",
]
