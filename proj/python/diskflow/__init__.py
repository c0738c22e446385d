"""Spectral simulator for a rigid disk in a 2D viscous fluid."""

from ._diskflow import *  # noqa: F401,F403
from ._diskflow import DiskflowError, __doc__  # noqa: F401
