"""Python interface to the sliding-mode control simulation toolkit."""

from ._qcsmc import *  # noqa: F401,F403
from ._qcsmc import __doc__  # noqa: F401
