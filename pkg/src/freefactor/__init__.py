"""Free-factor projections, Stallings foldings, RAAG normal forms, and
Farey-graph geometry, with a verification CLI."""

from freefactor._kernel import IMPLEMENTATION as kernel_implementation

__version__ = "0.1.0"
__all__ = ["kernel_implementation", "__version__"]
