"""plausets: exact confidence regions from predictive random sets.

Plausibility functions induced by valid predictive random sets are
thresholded into confidence regions with finite-sample coverage. The
package ships the reliability models (power-law process, exponential
regression through the origin, lognormal and generic location-scale
lifetimes), region extraction, a coverage simulation harness, and a CSV
CLI.
"""

from ._accel import BACKEND, using_numba

__version__ = "0.1.0"
__all__ = ["BACKEND", "using_numba", "__version__"]
