"""Batched element arithmetic for permutation and affine realizations.

An element is a flat integer row. A realization is a tuple of blocks and an
element row is the concatenation of one row per block; multiplication is
blockwise, so a realization with several blocks is a subgroup of the direct
product of the block groups.

Products follow the right-action convention used throughout the package:
``x^(gh) = (x^g)^h``.  For permutations ``(g*h)[i] = h[g[i]]``; for affine
pairs acting on row vectors by ``x -> x M + v`` the product is
``(v_g M_h + v_h, M_g M_h)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import MixedRealization


def _inverse_table(r: int) -> np.ndarray:
    table = np.zeros(r, dtype=np.int64)
    for x in range(1, r):
        table[x] = pow(x, r - 2, r)
    return table


def batch_matinv_mod(M: np.ndarray, r: int) -> np.ndarray:
    """Invert a stack of square matrices over GF(r) by Gauss-Jordan.

    Raises ``ValueError`` if any matrix is singular.
    """
    N, n, _ = M.shape
    inv_tab = _inverse_table(r)
    A = np.concatenate([M % r, np.broadcast_to(np.eye(n, dtype=np.int64), (N, n, n))], axis=2).copy()
    rows = np.arange(N)
    for c in range(n):
        nz = A[:, c:, c] != 0
        if not nz.any(axis=1).all():
            raise ValueError("singular matrix over GF(%d)" % r)
        piv = c + np.argmax(nz, axis=1)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        A[:, c] = A[:, c] * inv_tab[A[:, c, c]][:, None] % r
        factor = A[:, :, c].copy()
        factor[:, c] = 0
        A = (A - factor[:, :, None] * A[:, c][:, None, :]) % r
    return A[:, :, n:]


@dataclass(frozen=True)
class PermBlock:
    """Permutations of ``0..degree-1`` stored as image sequences."""

    degree: int

    @property
    def width(self) -> int:
        return self.degree

    @property
    def radices(self) -> list[int]:
        return [max(self.degree, 1)] * self.degree

    def identity(self) -> np.ndarray:
        return np.arange(self.degree, dtype=np.int64)

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        X, Y = np.broadcast_arrays(X, Y)
        return np.take_along_axis(Y, X, axis=-1)

    def inv(self, X: np.ndarray) -> np.ndarray:
        out = np.empty_like(X)
        idx = np.broadcast_to(np.arange(self.degree, dtype=X.dtype), X.shape)
        np.put_along_axis(out, X, idx, axis=-1)
        return out

    def validate(self, row: np.ndarray) -> None:
        if sorted(int(v) for v in row) != list(range(self.degree)):
            raise ValueError("permutation images are not a bijection on 0..%d" % (self.degree - 1))

    def format(self, row: np.ndarray) -> str:
        seen: set[int] = set()
        out = []
        for i in range(self.degree):
            if i in seen or int(row[i]) == i:
                continue
            cycle = [i]
            seen.add(i)
            j = int(row[i])
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = int(row[j])
            out.append("(%s)" % " ".join(map(str, cycle)))
        return "".join(out) or "()"

    def describe(self) -> dict:
        return {"kind": "perm", "degree": self.degree}


@dataclass(frozen=True)
class AffineBlock:
    """Affine maps ``x -> x M + v`` of GF(r)^n, stored as ``v`` then ``M`` row-major."""

    r: int
    n: int

    @property
    def width(self) -> int:
        return self.n + self.n * self.n

    @property
    def radices(self) -> list[int]:
        return [self.r] * self.width

    def split(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        return X[..., :n], X[..., n:].reshape(X.shape[:-1] + (n, n))

    def join(self, v: np.ndarray, M: np.ndarray) -> np.ndarray:
        return np.concatenate([v, M.reshape(M.shape[:-2] + (self.n * self.n,))], axis=-1)

    def identity(self) -> np.ndarray:
        return self.join(np.zeros(self.n, dtype=np.int64), np.eye(self.n, dtype=np.int64))

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        X, Y = np.broadcast_arrays(X, Y)
        v1, M1 = self.split(X)
        v2, M2 = self.split(Y)
        # explicit sums over the (tiny) inner dimension beat einsum on int64
        v = v2.copy()
        M = np.zeros_like(M1)
        for j in range(self.n):
            v += v1[..., j, None] * M2[..., j, :]
            M += M1[..., :, j, None] * M2[..., None, j, :]
        return self.join(v % self.r, M % self.r)

    def inv(self, X: np.ndarray) -> np.ndarray:
        v, M = self.split(X)
        shape = M.shape
        Minv = batch_matinv_mod(M.reshape((-1, self.n, self.n)), self.r).reshape(shape)
        w = (-(v[..., :, None] * Minv).sum(axis=-2)) % self.r
        return self.join(w, Minv)

    def validate(self, row: np.ndarray) -> None:
        _, M = self.split(np.asarray(row)[None, :])
        batch_matinv_mod(M, self.r)

    def format(self, row: np.ndarray) -> str:
        v, M = self.split(np.asarray(row))
        vec = " ".join(str(int(a)) for a in v)
        mat = "; ".join(" ".join(str(int(a)) for a in line) for line in M)
        return "(%s | %s)" % (vec, mat)

    def describe(self) -> dict:
        return {"kind": "affine", "prime": self.r, "dim": self.n}


Block = PermBlock | AffineBlock


class Realization:
    """A tuple of blocks with batched multiply, inverse and exact encoding."""

    def __init__(self, blocks: Sequence[Block]):
        self.blocks = tuple(blocks)
        offsets = [0]
        for b in self.blocks:
            offsets.append(offsets[-1] + b.width)
        self.offsets = offsets
        self.width = offsets[-1]
        radices: list[int] = []
        for b in self.blocks:
            radices.extend(b.radices)
        self.radices = radices
        bits = sum(math.log2(max(r, 1)) for r in radices)
        self.int_codes = bits < 62
        if self.int_codes:
            weights = np.ones(self.width, dtype=np.int64)
            for i in range(self.width - 2, -1, -1):
                weights[i] = weights[i + 1] * radices[i + 1]
            self._weights = weights

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Realization) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def _parts(self, X: np.ndarray):
        for b, lo, hi in zip(self.blocks, self.offsets, self.offsets[1:]):
            yield b, X[..., lo:hi]

    def identity(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([b.identity() for b in self.blocks])

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        X, Y = np.broadcast_arrays(np.asarray(X, dtype=np.int64), np.asarray(Y, dtype=np.int64))
        if not self.blocks:
            return X.copy()
        out = [b.mul(x, y) for (b, x), (_, y) in zip(self._parts(X), self._parts(Y))]
        return np.concatenate(out, axis=-1)

    def inv(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        if not self.blocks:
            return X.copy()
        return np.concatenate([b.inv(x) for b, x in self._parts(X)], axis=-1)

    def validate(self, row: np.ndarray) -> None:
        row = np.asarray(row, dtype=np.int64)
        if row.shape != (self.width,):
            raise MixedRealization("element of width %d in realization of width %d" % (row.shape[0], self.width))
        for b, x in self._parts(row):
            b.validate(x)

    def encode(self, X: np.ndarray) -> np.ndarray:
        """Injective codes for a batch of rows; comparable with each other only."""
        X = np.ascontiguousarray(X, dtype=np.int64).reshape(-1, self.width)
        if self.int_codes:
            return X @ self._weights
        return X.view(np.dtype((np.void, 8 * self.width))).ravel()

    def format(self, row: np.ndarray) -> str:
        return " x ".join(b.format(x) for b, x in self._parts(np.asarray(row))) or "()"

    def describe(self) -> list[dict]:
        return [b.describe() for b in self.blocks]
