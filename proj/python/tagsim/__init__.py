"""Windowed tagging-process simulation and entry-stream analysis.

The heavy lifting lives in the compiled extension; this package re-exports
the operation entry points (simulate / analyze / report) and a few measurement
helpers that are handy on their own.
"""

from tagsim._core import (
    ConfigurationError,
    TagsimError,
    __version__,
    analyze,
    bin_index,
    report,
    simulate,
    spearman_critical,
    spearman_rho,
)

__all__ = [
    "ConfigurationError",
    "TagsimError",
    "__version__",
    "analyze",
    "bin_index",
    "report",
    "simulate",
    "spearman_critical",
    "spearman_rho",
]
