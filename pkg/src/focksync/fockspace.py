"""Truncated number-basis operators, including counting-field deformations.

Operators are plain complex ndarrays in the number basis |0>, ..., |M-1>.
The counting field q deforms ladder operators through conjugation with the
phase shift, which sends matrix elements sqrt(n) to sqrt(n - q) and any
diagonal function f(n) to f(n - q). The truncated vacuum row is defined by
a(q)|0> = 0 for every q; the stabilized limit cycle keeps population away
from the vacuum, so this row never carries weight in valid runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specfun import kummer_1f1_neg


@dataclass(frozen=True)
class FockSpace:
    """Truncated bosonic mode with basis states |0> .. |dim-1>."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("FockSpace needs dim >= 2")


def _dim(space):
    if isinstance(space, FockSpace):
        return space.dim
    return FockSpace(int(space)).dim


def destroy(space, q=0.0):
    """Deformed annihilation operator with <n-1| a(q) |n> = sqrt(n - q).

    q = 0 reproduces the textbook annihilation matrix exactly; |q| <= 1
    keeps every entry real.
    """
    if abs(q) > 1.0:
        raise ValueError("destroy requires |q| <= 1")
    m = _dim(space)
    a = np.zeros((m, m), dtype=complex)
    n = np.arange(1, m)
    a[n - 1, n] = np.sqrt(n - q)
    return a


def create(space, q=0.0):
    """Deformed creation operator with <n+1| |n> = sqrt(n + 1 - q)."""
    return destroy(space, q).conj().T


def number(space, q=0.0):
    """Shifted number operator diag(n - q)."""
    m = _dim(space)
    return np.diag(np.arange(m) - q).astype(complex)


def diag_fn(space, f, q=0.0):
    """Diagonal operator with entries f(n - q) for n = 0 .. M-1.

    Failures of f propagate to the caller.
    """
    m = _dim(space)
    vals = [f(n - q) for n in range(m)]
    return np.diag(np.asarray(vals, dtype=complex))


def gain_profile(space, alpha, q=0.0):
    """Diagonal gain amplitude diag of 1F1(-(n - q), 2, alpha)."""
    if alpha <= 0.0:
        raise ValueError("gain_profile requires alpha > 0")
    return diag_fn(space, lambda x: kummer_1f1_neg(x, alpha), q)


def gain_jump(space, alpha, q=0.0):
    """Nonlinear gain jump operator, raising with a blockade profile.

    Matrix elements <n+1| . |n> = sqrt(n + 1 - q) * 1F1(-(n - q), 2, alpha).
    At q = 0 the element out of n0 vanishes when alpha is the first zero of
    the degree-n0 Laguerre polynomial, which blocks gain beyond n0.
    """
    if abs(q) > 0.5:
        raise ValueError("gain_jump requires |q| <= 0.5")
    return create(space, q) @ gain_profile(space, alpha, q)
