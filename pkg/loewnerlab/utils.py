from datetime import datetime, timezone

import numpy as np


def get_current_timestamp() -> datetime:
    return datetime.now(timezone.utc)


def as_complex_array(points) -> np.ndarray:
    """Accepts complex numbers or (x, y) pairs and returns a 1-d complex array."""
    arr = np.asarray(points)
    if np.iscomplexobj(arr):
        return arr.astype(complex).reshape(-1)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0].astype(float) + 1j * arr[:, 1].astype(float)
    return arr.astype(complex).reshape(-1)


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr
