"""Decision-theoretic size-constrained clustering of categorical survey data."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
