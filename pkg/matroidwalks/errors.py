from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals


class MatroidWalksError(ValueError):
    """
    Base class of every error raised on invalid input to the package.
    Subclasses `ValueError` so callers validating arguments can keep catching that.
    """


class InvalidParameters(MatroidWalksError):
    pass


class InvalidSupport(MatroidWalksError):
    pass


class InvalidWeight(MatroidWalksError):
    pass


class InvalidArgument(MatroidWalksError):
    pass


class InvalidState(MatroidWalksError):
    pass


class InvalidFunction(MatroidWalksError):
    pass


class InvalidKernel(MatroidWalksError):
    pass


class InvalidDistribution(MatroidWalksError):
    pass


class Unsupported(MatroidWalksError):
    pass


class SizeCapExceeded(MatroidWalksError):
    """Instance too large for exhaustive enumeration or dense materialisation."""
