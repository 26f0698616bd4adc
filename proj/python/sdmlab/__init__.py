"""Time-interleaved sigma-delta DAC simulation."""

from ._sdmlab import *  # noqa: F401,F403
from ._sdmlab import __version__  # noqa: F401
