"""Figure rendering for codeball experiment outputs."""

from .inputs import MetadataMismatch, MissingInput
from .render import FIGURE_IDS, FigureSpec, render

__version__ = "0.1.0"
