"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np

__all__ = [
    "check_positive",
    "check_q",
    "check_grid_size",
    "check_rng",
    "as_complex_vector",
    "as_complex_points",
    "wrap_angle",
]


def check_positive(name: str, value, *, strict: bool = True) -> float:
    """Return ``value`` as a finite float, requiring it to be positive."""
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if strict and value <= 0.0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    if not strict and value < 0.0:
        raise ValueError(f"{name} must be nonnegative, got {value!r}")
    return value


def check_q(q) -> int:
    """Validate a sector count: an integer with q >= 2."""
    if not isinstance(q, numbers.Integral) or isinstance(q, bool):
        raise TypeError(f"q must be an integer, got {q!r}")
    q = int(q)
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    return q


def check_grid_size(n, *, minimum: int = 8) -> int:
    """Validate an angular grid size: a power of two, at least ``minimum``."""
    if not isinstance(n, numbers.Integral) or isinstance(n, bool):
        raise TypeError(f"grid size must be an integer, got {n!r}")
    n = int(n)
    if n < minimum or (n & (n - 1)) != 0:
        raise ValueError(f"grid size must be a power of two >= {minimum}, got {n}")
    return n


def check_rng(seed) -> np.random.Generator:
    """Coerce an int seed or an existing Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, numbers.Integral):
        return np.random.default_rng(seed)
    raise TypeError(f"seed must be an int, None, or numpy Generator, got {seed!r}")


def as_complex_vector(value, *, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-d complex array, optionally of a required length."""
    arr = np.atleast_1d(np.asarray(value, dtype=complex))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} must be finite")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} must have length {dim}, got {arr.shape[0]}")
    return arr


def as_complex_points(X, *, dim: int) -> np.ndarray:
    """Coerce a point batch to complex shape (n, dim).

    Accepts complex arrays of shape (n,) for dim 1, complex (n, dim), or real
    (n, 2*dim) with interleaved (re, im) pairs per coordinate.
    """
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        arr = np.asarray(arr, dtype=complex)
        if arr.ndim == 1 and dim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[1] != dim:
            raise ValueError(f"expected complex points of shape (n, {dim}), got {arr.shape}")
        return arr
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1 and dim == 1 and arr.shape[0] == 2:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2 * dim:
        raise ValueError(
            f"expected real points of shape (n, {2 * dim}) as (re, im) pairs, got {arr.shape}"
        )
    return arr[:, 0::2] + 1j * arr[:, 1::2]


def wrap_angle(theta):
    """Wrap angles into [-pi, pi)."""
    return (np.asarray(theta, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi
