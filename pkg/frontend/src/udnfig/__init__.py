"""Figure rendering for the udnsim simulator's CSV outputs.

The package consumes only the documented CSV schemas - there is no
in-process coupling to the simulator - and renders the four standard
figure kinds deterministically: ``sinr_cdf``, ``tput_vs_isd``,
``sched_bars`` and ``ee_vs_isd``.
"""

from .figspec import FIGURE_KINDS, FigureSpec
from .render import MissingSeriesError, RenderError, render
from .schema import SchemaError, read_table

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "MissingSeriesError",
    "RenderError",
    "SchemaError",
    "read_table",
    "render",
]
