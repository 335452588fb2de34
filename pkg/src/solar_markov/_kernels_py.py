"""Pure-Python versions of the compiled kernels.

Used when the extension is not built, or when ``SOLAR_MARKOV_PURE_PYTHON`` is
set. Outputs are identical to the compiled path for identical inputs.
"""

import numpy as np

NSTATES = 4


def count_pairs(codes, start, stop):
    """Count transitions codes[t] -> codes[t+1] for start <= t < stop."""
    codes = np.asarray(codes, dtype=np.int64)
    start = max(start, 0)
    stop = min(stop, len(codes) - 1)
    if stop <= start:
        return np.zeros((NSTATES, NSTATES), dtype=np.int64)
    src = codes[start:stop] - 1
    dst = codes[start + 1:stop + 1] - 1
    flat = np.bincount(src * NSTATES + dst, minlength=NSTATES * NSTATES)
    return flat.reshape(NSTATES, NSTATES).astype(np.int64)


def sample_path(cumprobs, step_segment, uniforms, initial):
    """Draw a state path; step k moves slot k to k+1 using matrix step_segment[k]."""
    n = len(step_segment) + 1
    out = np.empty(n, dtype=np.int64)
    cur = int(initial)
    out[0] = cur
    for k in range(n - 1):
        row = cumprobs[step_segment[k], cur - 1]
        total = row[NSTATES - 1]
        if total > 0.0:
            u = uniforms[k] * total
            j = 0
            while j < NSTATES - 1 and u >= row[j]:
                j += 1
            cur = j + 1
        out[k + 1] = cur
    return out
