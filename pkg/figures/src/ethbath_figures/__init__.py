"""Figure regeneration for ethbath artifact directories."""

from .render import FIGURE_IDS, ArtifactError, FigureSpec, build_spec, render

__all__ = ["FIGURE_IDS", "ArtifactError", "FigureSpec", "build_spec", "render"]
