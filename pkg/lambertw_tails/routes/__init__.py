"""Routes package."""

from .fit import router as fit_router
from .diagnostics import router as diagnostics_router
from .distributions import router as distributions_router

__all__ = ["fit_router", "diagnostics_router", "distributions_router"]
