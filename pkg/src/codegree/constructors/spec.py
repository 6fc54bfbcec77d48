"""Declarative group specs: node types, JSON form, digest, aliases.

A spec file is a JSON object with a ``kind`` key naming the node; children are
nested objects.  Matrices are row-major lists of rows with entries reduced mod
the field prime.  Action lists are aligned with the complement's generators
(as produced by the builder, see :mod:`.build`).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Union

from ..errors import SpecError


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class ElementaryAbelian:
    p: int
    k: int


@dataclass(frozen=True)
class Symmetric:
    d: int


@dataclass(frozen=True)
class Alternating:
    d: int


@dataclass(frozen=True)
class Permutations:
    """Subgroup of Sym(degree) given by image lists."""

    degree: int
    generators: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple["GroupSpec", ...]


@dataclass(frozen=True)
class MatrixAction:
    """Complement generator i acts on the kernel GF(prime)^dim by ``matrices[i]``."""

    prime: int
    dim: int
    matrices: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class AutomorphismAction:
    """``images[i][j]`` is the image of kernel generator j under complement generator i.

    An image is a word: a tuple of (kernel generator index, exponent) pairs.
    """

    images: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]


Action = Union[MatrixAction, AutomorphismAction]


@dataclass(frozen=True)
class Semidirect:
    kernel: "GroupSpec"
    complement: "GroupSpec"
    action: Action


@dataclass(frozen=True)
class Frobenius:
    """Semidirect product asserted to be Frobenius with the given kernel."""

    kernel: "GroupSpec"
    complement: "GroupSpec"
    action: Action


@dataclass(frozen=True)
class TwoFrobenius:
    """bottom x| (middle x| top); matrix actions on the bottom, any action of top on middle."""

    bottom: "GroupSpec"
    middle: "GroupSpec"
    top: "GroupSpec"
    middle_on_bottom: MatrixAction
    top_on_bottom: MatrixAction
    top_on_middle: Action
    expected_type: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class Qian:
    q: int
    r: int


@dataclass(frozen=True)
class FiveCycle:
    pass


GroupSpec = Union[
    Cyclic, ElementaryAbelian, Symmetric, Alternating, Permutations, DirectProduct,
    Semidirect, Frobenius, TwoFrobenius, Qian, FiveCycle,
]

_KINDS = {
    "cyclic": Cyclic,
    "elementary_abelian": ElementaryAbelian,
    "symmetric": Symmetric,
    "alternating": Alternating,
    "permutations": Permutations,
    "direct_product": DirectProduct,
    "semidirect": Semidirect,
    "frobenius": Frobenius,
    "two_frobenius": TwoFrobenius,
    "qian": Qian,
    "five_cycle": FiveCycle,
}
_KIND_OF = {cls: name for name, cls in _KINDS.items()}


# serialization ---------------------------------------------------------------

def _matrix_list(m) -> list:
    return [list(row) for row in m]


def action_to_dict(a: Action) -> dict:
    if isinstance(a, MatrixAction):
        return {"kind": "matrix", "prime": a.prime, "dim": a.dim,
                "matrices": [_matrix_list(m) for m in a.matrices]}
    return {"kind": "automorphism",
            "images": [[[list(pair) for pair in word] for word in gen] for gen in a.images]}


def to_dict(spec: GroupSpec) -> dict:
    kind = _KIND_OF[type(spec)]
    if isinstance(spec, Cyclic):
        return {"kind": kind, "n": spec.n}
    if isinstance(spec, ElementaryAbelian):
        return {"kind": kind, "p": spec.p, "k": spec.k}
    if isinstance(spec, (Symmetric, Alternating)):
        return {"kind": kind, "d": spec.d}
    if isinstance(spec, Permutations):
        return {"kind": kind, "degree": spec.degree, "generators": [list(g) for g in spec.generators]}
    if isinstance(spec, DirectProduct):
        return {"kind": kind, "factors": [to_dict(f) for f in spec.factors]}
    if isinstance(spec, (Semidirect, Frobenius)):
        return {"kind": kind, "kernel": to_dict(spec.kernel), "complement": to_dict(spec.complement),
                "action": action_to_dict(spec.action)}
    if isinstance(spec, TwoFrobenius):
        out = {"kind": kind, "bottom": to_dict(spec.bottom), "middle": to_dict(spec.middle),
               "top": to_dict(spec.top),
               "middle_on_bottom": action_to_dict(spec.middle_on_bottom),
               "top_on_bottom": action_to_dict(spec.top_on_bottom),
               "top_on_middle": action_to_dict(spec.top_on_middle)}
        if spec.expected_type is not None:
            out["expected_type"] = list(spec.expected_type)
        return out
    if isinstance(spec, Qian):
        return {"kind": kind, "q": spec.q, "r": spec.r}
    return {"kind": kind}


def canonical_json(spec: GroupSpec) -> str:
    return json.dumps(to_dict(spec), sort_keys=True, separators=(",", ":"))


def digest(spec: GroupSpec) -> str:
    """sha256 of the canonical serialization; stable across runs and platforms."""
    return hashlib.sha256(canonical_json(spec).encode()).hexdigest()


# parsing ---------------------------------------------------------------------

def _get(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise SpecError(path, "missing field %r" % key)
    return obj[key]


def _int(value: Any, path: str, lo: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(path, "expected an integer, got %r" % (value,))
    if value < lo:
        raise SpecError(path, "expected an integer >= %d, got %d" % (lo, value))
    return value


def _int_rows(value: Any, path: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise SpecError(path, "expected a list of integer lists")
    return tuple(tuple(_int(v, path, lo=0) for v in row) for row in value)


def action_from_dict(obj: Any, path: str) -> Action:
    if not isinstance(obj, dict):
        raise SpecError(path, "action must be an object")
    kind = _get(obj, "kind", path)
    if kind == "matrix":
        prime = _int(_get(obj, "prime", path), path + ".prime", lo=2)
        dim = _int(_get(obj, "dim", path), path + ".dim")
        mats = _get(obj, "matrices", path)
        if not isinstance(mats, list):
            raise SpecError(path + ".matrices", "expected a list of matrices")
        out = []
        for i, m in enumerate(mats):
            rows = _int_rows(m, "%s.matrices[%d]" % (path, i))
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise SpecError("%s.matrices[%d]" % (path, i), "expected a %dx%d matrix" % (dim, dim))
            out.append(tuple(tuple(v % prime for v in r) for r in rows))
        return MatrixAction(prime, dim, tuple(out))
    if kind == "automorphism":
        images = _get(obj, "images", path)
        if not isinstance(images, list):
            raise SpecError(path + ".images", "expected a list")
        gens = []
        for i, gen in enumerate(images):
            p = "%s.images[%d]" % (path, i)
            if not isinstance(gen, list):
                raise SpecError(p, "expected a list of words")
            words = []
            for j, word in enumerate(gen):
                wp = "%s[%d]" % (p, j)
                if not isinstance(word, list):
                    raise SpecError(wp, "expected a word [[generator, exponent], ...]")
                pairs = []
                for pair in word:
                    if not (isinstance(pair, list) and len(pair) == 2):
                        raise SpecError(wp, "word letters are [generator, exponent] pairs")
                    g = _int(pair[0], wp, lo=0)
                    if isinstance(pair[1], bool) or not isinstance(pair[1], int):
                        raise SpecError(wp, "exponent must be an integer")
                    pairs.append((g, pair[1]))
                words.append(tuple(pairs))
            gens.append(tuple(words))
        return AutomorphismAction(tuple(gens))
    raise SpecError(path + ".kind", "unknown action kind %r" % (kind,))


def from_dict(obj: Any, path: str = "$") -> GroupSpec:
    if not isinstance(obj, dict):
        raise SpecError(path, "node must be an object")
    kind = _get(obj, "kind", path)
    if kind not in _KINDS:
        raise SpecError(path + ".kind", "unknown node kind %r" % (kind,))
    if kind == "cyclic":
        return Cyclic(_int(_get(obj, "n", path), path + ".n"))
    if kind == "elementary_abelian":
        return ElementaryAbelian(_int(_get(obj, "p", path), path + ".p", lo=2),
                                 _int(_get(obj, "k", path), path + ".k"))
    if kind == "symmetric":
        return Symmetric(_int(_get(obj, "d", path), path + ".d"))
    if kind == "alternating":
        return Alternating(_int(_get(obj, "d", path), path + ".d"))
    if kind == "permutations":
        degree = _int(_get(obj, "degree", path), path + ".degree")
        gens = _int_rows(_get(obj, "generators", path), path + ".generators")
        for i, g in enumerate(gens):
            if sorted(g) != list(range(degree)):
                raise SpecError("%s.generators[%d]" % (path, i), "not a permutation of 0..%d" % (degree - 1))
        return Permutations(degree, gens)
    if kind == "direct_product":
        factors = _get(obj, "factors", path)
        if not isinstance(factors, list) or not factors:
            raise SpecError(path + ".factors", "expected a non-empty list")
        return DirectProduct(tuple(from_dict(f, "%s.factors[%d]" % (path, i)) for i, f in enumerate(factors)))
    if kind in ("semidirect", "frobenius"):
        cls = Semidirect if kind == "semidirect" else Frobenius
        return cls(from_dict(_get(obj, "kernel", path), path + ".kernel"),
                   from_dict(_get(obj, "complement", path), path + ".complement"),
                   action_from_dict(_get(obj, "action", path), path + ".action"))
    if kind == "two_frobenius":
        mats = {}
        for key in ("middle_on_bottom", "top_on_bottom"):
            a = action_from_dict(_get(obj, key, path), path + "." + key)
            if not isinstance(a, MatrixAction):
                raise SpecError(path + "." + key, "action on the bottom layer must be a matrix action")
            mats[key] = a
        expected = obj.get("expected_type")
        if expected is not None:
            if not (isinstance(expected, list) and len(expected) == 3):
                raise SpecError(path + ".expected_type", "expected a prime triple")
            expected = tuple(_int(v, path + ".expected_type", lo=2) for v in expected)
        return TwoFrobenius(
            from_dict(_get(obj, "bottom", path), path + ".bottom"),
            from_dict(_get(obj, "middle", path), path + ".middle"),
            from_dict(_get(obj, "top", path), path + ".top"),
            mats["middle_on_bottom"], mats["top_on_bottom"],
            action_from_dict(_get(obj, "top_on_middle", path), path + ".top_on_middle"),
            expected,
        )
    if kind == "qian":
        return Qian(_int(_get(obj, "q", path), path + ".q", lo=2), _int(_get(obj, "r", path), path + ".r", lo=2))
    return FiveCycle()


def loads(text: str, source: str = "$") -> GroupSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(source, "invalid JSON: %s" % exc) from None
    return from_dict(obj, source)


def load(path: str) -> GroupSpec:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), "$")


# aliases ---------------------------------------------------------------------

def _scalar(p: int, c: int) -> MatrixAction:
    return MatrixAction(p, 1, (((c % p,),),))


def _alias_table() -> dict[str, GroupSpec]:
    return {
        "s3": Symmetric(3),
        "s4": Symmetric(4),
        "a4": Alternating(4),
        "a5": Alternating(5),
        "s5": Symmetric(5),
        "d8": Semidirect(Cyclic(4), Cyclic(2), AutomorphismAction(((((0, -1),),),))),
        "q8": Permutations(8, ((2, 3, 1, 0, 7, 6, 4, 5), (4, 5, 6, 7, 1, 0, 3, 2))),
        "z6": Cyclic(6),
        "f21": Frobenius(Cyclic(7), Cyclic(3), _scalar(7, 2)),
        "f42": Frobenius(Cyclic(7), Cyclic(6), _scalar(7, 3)),
        "five-cycle": FiveCycle(),
    }


ALIASES = _alias_table()


def resolve(name: str) -> GroupSpec:
    """Built-in alias (``s4``, ``qian:3,7``, ...) to a spec."""
    key = name.strip().lower()
    if key in ALIASES:
        return ALIASES[key]
    if key.startswith("qian:"):
        try:
            q, r = (int(v) for v in key[5:].split(","))
        except ValueError:
            raise SpecError("$", "alias %r: expected qian:q,r" % name) from None
        return Qian(q, r)
    raise SpecError("$", "unknown alias %r" % name)
