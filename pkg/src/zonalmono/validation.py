"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .sphere_quad import spherical_to_cartesian


def check_points(X, n_points: int | None = None, spherical: bool = False) -> np.ndarray:
    """Validate a point set and return unit vectors of shape ``(N, 3)``.

    With ``spherical=True`` rows are ``(theta, phi)`` angles.
    """
    arr = check_array(X, dtype=np.float64, ensure_2d=True, ensure_min_samples=1)
    width = 2 if spherical else 3
    if arr.shape[1] != width:
        raise ValueError(f"expected {width} columns per point, got {arr.shape[1]}")
    if spherical:
        arr = spherical_to_cartesian(arr[:, 0], arr[:, 1])
    norms = np.linalg.norm(arr, axis=1)
    if np.any(norms < 1e-12):
        raise ValueError("points must be nonzero vectors")
    if n_points is not None and len(arr) != n_points:
        raise ValueError(f"expected {n_points} points, got {len(arr)}")
    return arr / norms[:, None]


def check_degree(k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError(f"degree must be an integer, got {type(k).__name__}")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return int(k)


def seed_from(random_state) -> int:
    """Map an sklearn-style ``random_state`` to a nonnegative integer seed."""
    if random_state is None:
        return 0
    if isinstance(random_state, (int, np.integer)):
        if random_state < 0:
            raise ValueError("random_state must be nonnegative")
        return int(random_state)
    if isinstance(random_state, np.random.RandomState):
        return int(random_state.randint(np.iinfo(np.int32).max))
    raise ValueError(f"cannot use {random_state!r} as a random_state")
