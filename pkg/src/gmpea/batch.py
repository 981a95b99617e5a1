"""Batched array primitives shared by every algorithm in the package.

Everything downstream is written against these helpers so that branches over
individuals become mask arithmetic and row reductions have a fixed order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

SENTINEL = -1


class RowMapError(RuntimeError):
    """Raised when the mapped function fails on one row."""

    def __init__(self, row: int, cause: BaseException):
        super().__init__(f"row_map failed on row {row}: {cause!r}")
        self.row = row


def heaviside(a) -> np.ndarray:
    """Return 1 where ``a >= 0`` and 0 elsewhere, as int8. H(0) is 1."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite mask source")
    return (a >= 0).astype(np.int8)


def masked_select(cond, a, b) -> np.ndarray:
    """Row-wise select: row i comes from ``a`` where ``cond[i] == 1`` else from ``b``.

    Equivalent to ``c*a + (1-c)*b`` with ``c`` in {0, 1}: for finite inputs
    one term is ``x*1`` and the other ``y*0``, so the sum is exact.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    cond = np.asarray(cond)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: a{a.shape} vs b{b.shape}")
    if cond.ndim != 1 or a.ndim == 0 or cond.shape[0] != a.shape[0]:
        raise ValueError(f"mask length {cond.shape} does not match {a.shape[0] if a.ndim else 0} rows")
    if np.any((cond != 0) & (cond != 1)):
        raise ValueError("mask entries must be 0 or 1")
    c = cond.reshape((-1,) + (1,) * (a.ndim - 1))
    # np.where equals the arithmetic form for finite rows and also keeps
    # inf payloads intact (inf * 0 would give nan).
    return np.where(c == 1, a, b)


def row_map(f: Callable[[np.ndarray], np.ndarray], batch, workers: int = 1) -> np.ndarray:
    """Apply ``f`` to each row of ``batch`` and stack the results.

    The output is identical to a sequential loop. ``workers > 1`` fans rows out
    over threads; results are gathered in row order so nothing changes.
    """
    batch = np.asarray(batch)

    def call(i):
        try:
            return np.asarray(f(batch[i]))
        except Exception as exc:  # noqa: BLE001 - re-raised with the row index
            raise RowMapError(i, exc) from exc

    n = batch.shape[0]
    if workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(call, range(n)))
    else:
        rows = [call(i) for i in range(n)]
    if not rows:
        return np.empty((0,) + batch.shape[1:], dtype=batch.dtype)
    return np.stack([np.atleast_1d(r) for r in rows])


def rowsum(a: np.ndarray) -> np.ndarray:
    """Sum over the last axis, strictly left to right.

    numpy's own reductions use pairwise summation whose association depends
    on the row length; a fixed order keeps batched results bit-equal to
    scalar loops.
    """
    a = np.asarray(a)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype if a.dtype.kind == "f" else float)
    acc = a[..., 0].copy()
    for k in range(1, a.shape[-1]):
        acc = acc + a[..., k]
    return acc


def rowprod(a: np.ndarray) -> np.ndarray:
    """Product over the last axis, strictly left to right."""
    a = np.asarray(a)
    if a.shape[-1] == 0:
        return np.ones(a.shape[:-1], dtype=a.dtype if a.dtype.kind == "f" else float)
    acc = a[..., 0].copy()
    for k in range(1, a.shape[-1]):
        acc = acc * a[..., k]
    return acc
