"""Pick the compiled sampling core when it is importable, numpy otherwise.

Set ``GIAMBELLI_DPP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _sampler_py

BACKEND = "python"
spectral_batch = _sampler_py.spectral_batch

if os.environ.get("GIAMBELLI_DPP_PURE_PYTHON") != "1":
    try:
        from . import _csampler
    except ImportError:  # extension not built
        pass
    else:
        spectral_batch = _csampler.spectral_batch
        BACKEND = "cython"
