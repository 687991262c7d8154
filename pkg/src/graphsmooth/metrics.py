import math

import numpy as np

from .core import Signal
from .errors import ValidationError


def psnr(a, b, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB over all samples.

    Returns ``math.inf`` for identical inputs.
    """
    a = a.values if isinstance(a, Signal) else np.asarray(a, dtype=np.float64).reshape(-1)
    b = b.values if isinstance(b, Signal) else np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch: {a.size} vs {b.size}")
    if not peak > 0:
        raise ValidationError("peak must be positive")
    diff = a - b
    mse = float(np.add.reduce(diff * diff)) / diff.size
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)
