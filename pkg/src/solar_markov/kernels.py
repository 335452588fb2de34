"""Backend selection for the hot loops (transition counting, path sampling).

The compiled extension is preferred. Set ``SOLAR_MARKOV_PURE_PYTHON=1`` to
force the pure-Python implementation.
"""

import os

if os.environ.get("SOLAR_MARKOV_PURE_PYTHON"):
    from ._kernels_py import count_pairs, sample_path

    BACKEND = "python"
else:
    try:
        from ._kernels import count_pairs, sample_path

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import count_pairs, sample_path

        BACKEND = "python"

__all__ = ["BACKEND", "count_pairs", "sample_path"]
