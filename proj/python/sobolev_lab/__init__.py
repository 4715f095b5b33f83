"""Sobolev metrics on the torus: spectral calculus, symbol certificates and
EPDiff integration, backed by the C++ library.

Fields are complex numpy arrays of Fourier coefficients with shape
(components, n, ..., n); use inverse_transform for physical samples.
"""

from ._sobolev import *  # noqa: F401,F403
from ._sobolev import __doc__  # noqa: F401

__version__ = "0.1.0"
