"""Corpus similarity measures, self-training experiments and gain prediction."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
