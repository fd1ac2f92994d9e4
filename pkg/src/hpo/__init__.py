"""Linear fractional composition operators on the Hardy space of the right half-plane.

Modules:

``lfmap``      affine symbols ``w -> a w + b`` and their algebra
``kernels``    exact reproducing-kernel algebra, conjugations and residuals
``spectral``   truncated matrices in the basis ``e_n = V z^n``
``classify``   rule-based classification with certificate conjugations
``verify``     named verification suites
``cli``        the ``hpo`` command
"""

__version__ = "0.1.0"
