"""Irreducible characters by the modular Dixon-Schneider method.

Pipeline: class constants -> common eigenvectors of the class matrices over a
prime field GF(p) with p = 1 (mod exponent) -> integer degrees -> exact
character values as root-of-unity multiplicities -> kernels and codegrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime, primitive_root

from ..errors import (
    DegreeSumMismatch,
    MultiplicityOutOfRange,
    NonIntegralCodegree,
    NoSquareRoot,
    SplitIncomplete,
)
from ..groups import ConjugacyData, FiniteGroup
from . import modp


class ClassConstants:
    """Class multiplication coefficients a_ijk, one k x k matrix per class i.

    ``matrix(i)[j, k]`` counts pairs (x, y) in C_i x C_j with x y = g_k.
    Matrices are built on first use and verified against the class sizes.
    """

    def __init__(self, G: FiniteGroup, conj: ConjugacyData | None = None):
        self.group = G
        self.conj = conj or G.conjugacy
        self.k = self.conj.k
        self.sizes = self.conj.sizes
        self._reps = self.conj.representatives
        self._cache: dict[int, np.ndarray] = {}

    def matrix(self, i: int) -> np.ndarray:
        if i in self._cache:
            return self._cache[i]
        G, k = self.group, self.k
        members = self.conj.classes[i].members
        inv = G.inverse[members]
        counts = np.zeros(k * k, dtype=np.int64)
        cols = np.arange(k)
        step = max(1, 400_000 // k)
        for lo in range(0, len(inv), step):
            y = G.mul(inv[lo:lo + step, None], self._reps[None, :])
            cls = self.conj.class_of[y]
            counts += np.bincount((cls * k + cols[None, :]).ravel(), minlength=k * k)
        M = counts.reshape(k, k)
        expected = self.sizes[i] * self.sizes
        if not np.array_equal(M @ self.sizes, expected):
            raise AssertionError("class constant row sums inconsistent for class %d" % i)
        M.setflags(write=False)
        self._cache[i] = M
        return M


def class_constants(G: FiniteGroup) -> ClassConstants:
    return ClassConstants(G)


def dixon_prime(order: int, exponent: int) -> tuple[int, int]:
    """Smallest prime p = 1 (mod exponent) with p > 2 sqrt(order), and a primitive exponent-th root."""
    p = 1
    while True:
        p += exponent
        if p * p > 4 * order and isprime(p):
            break
    g = int(primitive_root(p))
    return p, pow(g, (p - 1) // exponent, p)


@dataclass
class ModPCharacter:
    """Common eigenvector of the class matrices, normalized at the identity class.

    ``omega[j]`` is the central character value |C_j| chi(g_j) / chi(1) mod p
    and ``theta[j] = chi(g_j) / chi(1)`` mod p.
    """

    p: int
    omega: np.ndarray
    theta: np.ndarray
    degree: int | None = None


def mod_p_characters(cc: ClassConstants, p: int) -> list[ModPCharacter]:
    k = cc.k
    spaces: list[tuple[np.ndarray, list[int]]] = [(np.eye(k, dtype=np.int64), list(range(k)))]
    for i in range(k):
        if all(B.shape[1] == 1 for B, _ in spaces):
            break
        M = None
        refined = []
        for B, piv in spaces:
            m = B.shape[1]
            if m == 1:
                refined.append((B, piv))
                continue
            if M is None:
                M = cc.matrix(i) % p
            R = modp.matmul_mod(M, B, p)[piv, :]
            roots = modp.poly_roots(modp.charpoly(R, p), p)
            pieces = []
            for lam in roots:
                N = modp.nullspace((R - lam * np.eye(m, dtype=np.int64)) % p, p)
                pieces.append(modp.column_echelon(modp.matmul_mod(B, N, p), p))
            if sum(P.shape[1] for P, _ in pieces) != m:
                raise SplitIncomplete("eigenspaces of class matrix %d do not fill a subspace" % i)
            refined.extend(pieces)
        spaces = refined
    if any(B.shape[1] != 1 for B, _ in spaces) or len(spaces) != k:
        raise SplitIncomplete("common eigenspaces of dimension > 1 remain")
    sizes = cc.sizes % p
    size_inv = np.array([modp.inv_mod(int(s), p) for s in sizes], dtype=np.int64)
    out = []
    for B, _ in spaces:
        w = B[:, 0] % p
        w = w * modp.inv_mod(int(w[0]), p) % p
        out.append(ModPCharacter(p=p, omega=w, theta=w * size_inv % p))
    return out


def character_degrees(chars: list[ModPCharacter], order: int, inverse_class: np.ndarray) -> list[int]:
    """Recover chi(1) from d^2 = |G| / sum_j omega_j omega_j* / |C_j| (mod p)."""
    degrees = []
    for ch in chars:
        p = ch.p
        s = int((ch.theta * ch.omega[inverse_class]).sum() % p)
        if s == 0:
            raise NoSquareRoot("second orthogonality sum vanished mod %d" % p)
        target = order * modp.inv_mod(s, p) % p
        bound = math.isqrt(order)
        cand = np.arange(1, bound + 1, dtype=np.int64)
        hits = cand[(cand * cand) % p == target]
        if len(hits) != 1:
            raise NoSquareRoot("no degree d <= sqrt|G| with d^2 = %d mod %d" % (target, p))
        ch.degree = int(hits[0])
        degrees.append(ch.degree)
    if sum(d * d for d in degrees) != order:
        raise DegreeSumMismatch("sum of squared degrees %d != %d" % (sum(d * d for d in degrees), order))
    return degrees


@dataclass(frozen=True)
class LiftedCharacter:
    """An irreducible character with exact values.

    ``multiplicities[c]`` is a sparse map exponent -> count so that
    chi(g_c) = sum count * zeta_e^exponent; the dense vector of length e has
    zeros everywhere else.
    """

    degree: int
    multiplicities: tuple[tuple[tuple[int, int], ...], ...]
    kernel: tuple[int, ...]
    kernel_order: int
    codegree: int

    def dense(self, c: int, exponent: int) -> list[int]:
        vec = [0] * exponent
        for t, m in self.multiplicities[c]:
            vec[t] = m
        return vec


def lift_character(values: np.ndarray, degree: int, conj: ConjugacyData, z: int, p: int,
                   sizes: np.ndarray, order: int) -> LiftedCharacter:
    """Multiplicities m_ct = e^-1 sum_j chi(g_c^j) z^(-jt), read as integers in [0, d]."""
    rows = _lift_rows(np.asarray(values)[None, :], [degree], conj, z, p)
    return _finish(degree, rows[0], sizes, order)


def _lift_rows(X: np.ndarray, degrees: list[int], conj: ConjugacyData, z: int, p: int) -> list[list]:
    """Batched lift of several characters; class by class over all rows at once."""
    e = conj.exponent
    deg = np.asarray(degrees, dtype=np.int64)
    out: list[list] = [[] for _ in degrees]
    for c, cls in enumerate(conj.classes):
        o = cls.element_order
        w_inv = modp.inv_mod(pow(z, e // o, p), p)
        js = np.arange(o, dtype=np.int64)
        F = _power_table(w_inv, o, p)[np.outer(js, js) % o]
        vals = X[:, conj.power_map[c, :o]]
        m = modp.matmul_mod(vals, F, p) * modp.inv_mod(o, p) % p
        if (m > deg[:, None]).any():
            raise MultiplicityOutOfRange("class %d multiplicity outside [0, degree]" % c)
        if not np.array_equal(m.sum(axis=1), deg):
            raise MultiplicityOutOfRange("class %d multiplicities do not sum to the degree" % c)
        step = e // o
        for a in range(len(degrees)):
            nz = np.flatnonzero(m[a])
            out[a].append(tuple(zip((nz * step).tolist(), m[a, nz].tolist())))
    return out


def _power_table(w: int, o: int, p: int) -> np.ndarray:
    out = np.ones(o, dtype=np.int64)
    for j in range(1, o):
        out[j] = out[j - 1] * w % p
    return out


def _finish(degree: int, mults: list, sizes: np.ndarray, order: int) -> LiftedCharacter:
    kernel = tuple(c for c, m in enumerate(mults) if dict(m).get(0, 0) == degree)
    kernel_order = int(sum(int(sizes[c]) for c in kernel))
    if order % kernel_order:
        raise NonIntegralCodegree("kernel order %d does not divide %d" % (kernel_order, order))
    index = order // kernel_order
    if index % degree:
        raise NonIntegralCodegree("degree %d does not divide |G:ker| = %d" % (degree, index))
    return LiftedCharacter(degree=degree, multiplicities=tuple(mults), kernel=kernel,
                           kernel_order=kernel_order, codegree=index // degree)


@dataclass(eq=False)
class CharacterTable:
    order: int
    p: int
    z: int
    exponent: int
    class_sizes: tuple[int, ...]
    class_orders: tuple[int, ...]
    inverse_class: tuple[int, ...]
    characters: tuple[LiftedCharacter, ...]
    digest: str | None = None
    _values: np.ndarray | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def degrees(self) -> list[int]:
        return [ch.degree for ch in self.characters]

    @property
    def codegrees(self) -> tuple[int, ...]:
        return tuple(sorted({ch.codegree for ch in self.characters}))

    def values_mod_p(self) -> np.ndarray:
        """k x k array of chi(g_c) mod p rebuilt from the multiplicities."""
        if self._values is None:
            zpow = _power_table(self.z, self.exponent, self.p)
            X = np.zeros((len(self.characters), self.k), dtype=np.int64)
            for a, ch in enumerate(self.characters):
                for c, terms in enumerate(ch.multiplicities):
                    X[a, c] = sum(m * int(zpow[t]) for t, m in terms) % self.p
            self._values = X
        return self._values

    def first_orthogonality(self) -> bool:
        """sum_c |C_c| chi_a(g_c) chi_b(g_c^-1) = delta_ab |G| mod p."""
        X = self.values_mod_p()
        p = self.p
        sizes = np.array(self.class_sizes, dtype=np.int64) % p
        left = X * sizes[None, :] % p
        right = X[:, list(self.inverse_class)]
        gram = modp.matmul_mod(left, right.T, p)
        return bool(np.array_equal(gram, (self.order % p) * np.eye(len(X), dtype=np.int64)))

    def to_dict(self) -> dict:
        return {
            "digest": self.digest,
            "order": self.order,
            "p": self.p,
            "z": self.z,
            "e": self.exponent,
            "classes": {
                "sizes": list(self.class_sizes),
                "orders": list(self.class_orders),
                "inverse": list(self.inverse_class),
            },
            "characters": [
                {
                    "degree": ch.degree,
                    "kernel": list(ch.kernel),
                    "kernel_order": ch.kernel_order,
                    "codegree": ch.codegree,
                    # per class: flat [exponent, count, exponent, count, ...]
                    "multiplicities": [[x for tm in terms for x in tm] for terms in ch.multiplicities],
                }
                for ch in self.characters
            ],
            "codegrees": list(self.codegrees),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CharacterTable":
        chars = tuple(
            LiftedCharacter(
                degree=ch["degree"],
                multiplicities=tuple(tuple(zip(flat[0::2], flat[1::2])) for flat in ch["multiplicities"]),
                kernel=tuple(ch["kernel"]),
                kernel_order=ch["kernel_order"],
                codegree=ch["codegree"],
            )
            for ch in data["characters"]
        )
        return cls(
            order=data["order"], p=data["p"], z=data["z"], exponent=data["e"],
            class_sizes=tuple(data["classes"]["sizes"]),
            class_orders=tuple(data["classes"]["orders"]),
            inverse_class=tuple(data["classes"]["inverse"]),
            characters=chars, digest=data.get("digest"),
        )


def character_table(G: FiniteGroup, digest: str | None = None) -> CharacterTable:
    conj = G.conjugacy
    cc = ClassConstants(G, conj)
    p, z = dixon_prime(G.order, conj.exponent)
    chars = mod_p_characters(cc, p)
    character_degrees(chars, G.order, conj.inverse_class)
    sizes = conj.sizes
    X = np.array([ch.theta * ch.degree % p for ch in chars], dtype=np.int64).reshape(len(chars), conj.k)
    degrees = [ch.degree for ch in chars]
    rows = _lift_rows(X, degrees, conj, z, p)
    lifted = [(_finish(d, r, sizes, G.order), X[a]) for a, (d, r) in enumerate(zip(degrees, rows))]
    lifted.sort(key=lambda lv: (lv[0].degree, -lv[0].kernel_order, tuple(lv[1].tolist())))
    table = CharacterTable(
        order=G.order, p=p, z=z, exponent=conj.exponent,
        class_sizes=tuple(int(s) for s in sizes),
        class_orders=tuple(int(o) for o in conj.orders),
        inverse_class=tuple(int(i) for i in conj.inverse_class),
        characters=tuple(lc for lc, _ in lifted),
        digest=digest,
        _values=np.array([v for _, v in lifted], dtype=np.int64).reshape(len(lifted), conj.k),
    )
    if not table.first_orthogonality():
        raise AssertionError("first orthogonality fails mod %d" % p)
    return table


def codegree_set(table: CharacterTable) -> tuple[tuple[int, ...], list[int]]:
    """cod(G) and the codegree of each character in table order."""
    return table.codegrees, [ch.codegree for ch in table.characters]
