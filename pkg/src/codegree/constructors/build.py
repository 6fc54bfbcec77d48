"""Turn a spec tree into a FiniteGroup.

Each node is first lowered to a ``Construct``: a list of realization blocks,
generator rows and named component generator rows.  Generator order is part
of the contract because actions are given per complement generator:

* cyclic: one generator (the n-cycle);
* elementary abelian, rank k: the k unit translations;
* symmetric / alternating: two generators;
* permutations: as listed;
* direct product: factor generators in factor order;
* semidirect: kernel generators, then complement generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ActionNotHomomorphism, NotFixedPointFree, SpecError, StructureMismatch
from ..groups import (
    DEFAULT_LIMIT,
    AffineBlock,
    FiniteGroup,
    PermBlock,
    Realization,
    classify_frobenius,
    component_subgroup,
    prime_factors,
)
from ..groups.realization import batch_matinv_mod
from ..groups.subgroups import fixed_point_witness
from . import spec as S


@dataclass
class Construct:
    blocks: list
    gens: list[np.ndarray]
    components: dict[str, list[np.ndarray]] = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def realization(self) -> Realization:
        return Realization(self.blocks)


def _cycle(n: int, points: list[int] | None = None) -> np.ndarray:
    row = np.arange(n, dtype=np.int64)
    pts = list(range(n)) if points is None else points
    for a, b in zip(pts, pts[1:] + pts[:1]):
        row[a] = b
    return row


def _affine_row(block: AffineBlock, v, M) -> np.ndarray:
    return block.join(np.asarray(v, dtype=np.int64) % block.r, np.asarray(M, dtype=np.int64) % block.r)


def _elementary_rank(spec: S.GroupSpec, r: int) -> int | None:
    """Rank if ``spec`` is elementary abelian over GF(r) with unit-vector generators."""
    if isinstance(spec, S.Cyclic):
        return 1 if spec.n == r else None
    if isinstance(spec, S.ElementaryAbelian):
        return spec.k if spec.p == r else None
    if isinstance(spec, S.DirectProduct):
        ranks = [_elementary_rank(f, r) for f in spec.factors]
        return None if None in ranks else sum(ranks)
    return None


def _prefixed(prefix: str, comps: dict[str, list[np.ndarray]], lift) -> dict[str, list[np.ndarray]]:
    return {prefix + "." + name: [lift(row) for row in rows] for name, rows in comps.items()}


class Builder:
    def __init__(self, limit: int = DEFAULT_LIMIT):
        self.limit = limit

    def group(self, c: Construct, info: dict | None = None) -> FiniteGroup:
        return FiniteGroup(c.realization, c.gens, limit=self.limit, components=c.components,
                           info={**c.info, **(info or {})})

    # leaves ----------------------------------------------------------------

    def lower(self, spec: S.GroupSpec, path: str = "$") -> Construct:
        if isinstance(spec, S.Cyclic):
            return Construct([PermBlock(spec.n)], [_cycle(spec.n)])
        if isinstance(spec, S.ElementaryAbelian):
            block = AffineBlock(spec.p, spec.k)
            eye = np.eye(spec.k, dtype=np.int64)
            return Construct([block], [_affine_row(block, eye[i], eye) for i in range(spec.k)])
        if isinstance(spec, S.Symmetric):
            d = spec.d
            gens = [_cycle(d, [0, 1]), _cycle(d)] if d >= 2 else [_cycle(max(d, 1))]
            return Construct([PermBlock(max(d, 1))], gens)
        if isinstance(spec, S.Alternating):
            d = spec.d
            if d < 3:
                return Construct([PermBlock(max(d, 1))], [_cycle(max(d, 1), [0])])
            long = _cycle(d) if d % 2 else _cycle(d, list(range(1, d)))
            return Construct([PermBlock(d)], [_cycle(d, [0, 1, 2]), long])
        if isinstance(spec, S.Permutations):
            return Construct([PermBlock(spec.degree)], [np.array(g, dtype=np.int64) for g in spec.generators])
        if isinstance(spec, S.DirectProduct):
            return self._direct(spec, path)
        if isinstance(spec, S.Semidirect):
            return self._semidirect(spec.kernel, spec.complement, spec.action, path)
        raise SpecError(path, "node kind %s cannot be nested" % type(spec).__name__)

    def _direct(self, spec: S.DirectProduct, path: str) -> Construct:
        parts = [self.lower(f, "%s.factors[%d]" % (path, i)) for i, f in enumerate(spec.factors)]
        blocks = [b for p in parts for b in p.blocks]
        ids = [Realization(p.blocks).identity() for p in parts]
        gens: list[np.ndarray] = []
        comps: dict[str, list[np.ndarray]] = {}
        for i, p in enumerate(parts):
            def pad(row, i=i):
                return np.concatenate(ids[:i] + [row] + ids[i + 1:])
            gens.extend(pad(g) for g in p.gens)
            comps["factor%d" % i] = [pad(g) for g in p.gens]
            comps.update(_prefixed("factor%d" % i, p.components, pad))
        return Construct(blocks, gens, comps)

    # semidirect products ---------------------------------------------------

    def _semidirect(self, kernel: S.GroupSpec, complement: S.GroupSpec, action: S.Action, path: str) -> Construct:
        comp = self.lower(complement, path + ".complement")
        if isinstance(action, S.MatrixAction):
            return self._matrix_semidirect(kernel, comp, action, path)
        return self._auto_semidirect(self.lower(kernel, path + ".kernel"), comp, action, path)

    def _pair_group(self, head: list, images: list[np.ndarray], comp: Construct, path: str
                    ) -> tuple[bool, FiniteGroup]:
        """Check that generator -> image extends to a homomorphism of the complement.

        Returns (faithful, pair group) where the pair group is generated by
        (image_i, c_i); it has the complement's order exactly when the map is
        well defined.
        """
        C = FiniteGroup(comp.realization, comp.gens, limit=self.limit)
        pair = FiniteGroup(Realization(head + comp.blocks),
                           [np.concatenate([m, c]) for m, c in zip(images, comp.gens)], limit=self.limit)
        if pair.order != C.order:
            raise ActionNotHomomorphism(path + ".action", "generator images violate the complement's relations "
                                        "(image closure has order %d, complement %d)" % (pair.order, C.order))
        image = FiniteGroup(Realization(head), images, limit=self.limit)
        return image.order == C.order, pair

    @staticmethod
    def _lift_map(pair: FiniteGroup, head_width: int, comp: Construct, faithful: bool):
        """Map a complement row c to its row (image(c) [+ c]) in the product realization."""
        tail = pair.elements[:, head_width:]
        codes = comp.realization.encode(tail)
        order = np.argsort(codes, kind="stable")
        sorted_codes = codes[order]

        def lift(c: np.ndarray, head_prefix: np.ndarray) -> np.ndarray:
            code = comp.realization.encode(np.asarray(c)[None, :])
            i = order[np.searchsorted(sorted_codes, code)[0]]
            head = pair.elements[i, :head_width]
            parts = [head_prefix, head] if head_prefix is not None else [head]
            if not faithful:
                parts.append(np.asarray(c))
            return np.concatenate(parts)
        return lift

    def _matrix_semidirect(self, kernel: S.GroupSpec, comp: Construct, action: S.MatrixAction,
                           path: str) -> Construct:
        r, n = action.prime, action.dim
        rank = _elementary_rank(kernel, r)
        if rank is None:
            raise SpecError(path + ".kernel", "a matrix action needs an elementary abelian kernel over GF(%d)" % r)
        if rank != n:
            raise SpecError(path + ".action", "matrix dimension %d does not match kernel rank %d" % (n, rank))
        if len(action.matrices) != len(comp.gens):
            raise SpecError(path + ".action", "%d matrices for %d complement generators"
                            % (len(action.matrices), len(comp.gens)))
        mats = np.array(action.matrices, dtype=np.int64).reshape(-1, n, n) % r
        try:
            batch_matinv_mod(mats, r)
        except ValueError:
            raise SpecError(path + ".action", "singular action matrix over GF(%d)" % r) from None
        # linear parts only: (0 | M) acting on GF(r)^n
        lin = AffineBlock(r, n)
        zero = np.zeros(n, dtype=np.int64)
        images = [_affine_row(lin, zero, m) for m in mats]
        faithful, pair = self._pair_group([lin], images, comp, path)
        lift = self._lift_map(pair, lin.width, comp, faithful)

        blocks = [lin] + ([] if faithful else comp.blocks)
        comp_id = comp.realization.identity()
        eye = np.eye(n, dtype=np.int64)

        def kernel_row(v) -> np.ndarray:
            parts = [_affine_row(lin, v, eye)]
            if not faithful:
                parts.append(comp_id)
            return np.concatenate(parts)

        kgens = [kernel_row(eye[i]) for i in range(n)]
        cgens = [lift(c, None) for c in comp.gens]
        comps: dict[str, list[np.ndarray]] = {"kernel": kgens, "complement": cgens}
        if isinstance(kernel, S.DirectProduct):
            lo = 0
            for i, f in enumerate(kernel.factors):
                k = _elementary_rank(f, r)
                comps["kernel.factor%d" % i] = kgens[lo:lo + k]
                lo += k
        comps.update(_prefixed("complement", comp.components, lambda c: lift(c, None)))
        return Construct(blocks, kgens + cgens, comps)

    def _auto_semidirect(self, kern: Construct, comp: Construct, action: S.AutomorphismAction,
                         path: str) -> Construct:
        K = FiniteGroup(kern.realization, kern.gens, limit=self.limit)
        kidx = K.index_of(np.array(kern.gens).reshape(len(kern.gens), -1))
        if len(action.images) != len(comp.gens):
            raise SpecError(path + ".action", "%d image lists for %d complement generators"
                            % (len(action.images), len(comp.gens)))
        autos = []
        for i, words in enumerate(action.images):
            ip = "%s.action.images[%d]" % (path, i)
            if len(words) != len(kern.gens):
                raise SpecError(ip, "%d images for %d kernel generators" % (len(words), len(kern.gens)))
            targets = []
            for word in words:
                x = 0
                for g, e in word:
                    if g >= len(kern.gens):
                        raise SpecError(ip, "kernel generator %d out of range" % g)
                    base = int(kidx[g]) if e >= 0 else int(K.inverse[kidx[g]])
                    for _ in range(abs(e)):
                        x = int(K.mul(x, base))
                targets.append(x)
            autos.append(self._extend_automorphism(K, kidx, targets, ip))
        block = PermBlock(K.order)
        faithful, pair = self._pair_group([block], autos, comp, path)
        lift = self._lift_map(pair, block.width, comp, faithful)
        comp_id = comp.realization.identity()

        def kernel_row(row) -> np.ndarray:
            x = int(K.index_of(np.asarray(row)[None, :])[0])
            parts = [K.right_multiplication(x).astype(np.int64)]
            if not faithful:
                parts.append(comp_id)
            return np.concatenate(parts)

        kgens = [kernel_row(g) for g in kern.gens]
        cgens = [lift(c, None) for c in comp.gens]
        comps: dict[str, list[np.ndarray]] = {"kernel": kgens, "complement": cgens}
        comps.update(_prefixed("kernel", kern.components, kernel_row))
        comps.update(_prefixed("complement", comp.components, lambda c: lift(c, None)))
        blocks = [block] + ([] if faithful else comp.blocks)
        return Construct(blocks, kgens + cgens, comps)

    def _extend_automorphism(self, K: FiniteGroup, kidx: np.ndarray, targets: list[int], path: str) -> np.ndarray:
        """Permutation of K's universe extending generator -> target, checked to be an automorphism."""
        R = K.realization
        graph = FiniteGroup(Realization(list(R.blocks) * 2),
                            [np.concatenate([K.elements[a], K.elements[b]]) for a, b in zip(kidx, targets)],
                            limit=max(self.limit, K.order))
        if graph.order != K.order:
            raise ActionNotHomomorphism(path, "generator images do not define a homomorphism of the kernel")
        src = K.index_of(graph.elements[:, :R.width])
        dst = K.index_of(graph.elements[:, R.width:])
        perm = np.empty(K.order, dtype=np.int64)
        perm[src] = dst
        if len(np.unique(dst)) != K.order:
            raise ActionNotHomomorphism(path, "generator images do not define a bijection of the kernel")
        return perm


def _single_prime(G: FiniteGroup, name: str) -> int | None:
    primes = list(prime_factors(component_subgroup(G, name).order))
    return primes[0] if len(primes) == 1 else None


def _assert_fpf(G: FiniteGroup, actor: str, target: str) -> None:
    A, T = component_subgroup(G, actor), component_subgroup(G, target)
    w = fixed_point_witness(A, T)
    if w is not None:
        raise NotFixedPointFree(
            "%s does not act fixed-point-freely on %s: %s centralizes %s" % (actor, target, G.format(w[0]), G.format(w[1])),
            witness=(G.format(w[0]), G.format(w[1])),
        )


def _rename(c: Construct, mapping: dict[str, str]) -> Construct:
    c.components = {mapping[k]: v for k, v in c.components.items() if k in mapping}
    return c


def build(spec: S.GroupSpec, limit: int = DEFAULT_LIMIT) -> FiniteGroup:
    """Build any spec node; records the spec digest in ``G.info``."""
    from . import families

    info = {"digest": S.digest(spec), "kind": S.to_dict(spec)["kind"]}
    if isinstance(spec, S.Frobenius):
        return make_frobenius(spec.kernel, spec.complement, spec.action, limit=limit, info=info)
    if isinstance(spec, S.TwoFrobenius):
        return make_two_frobenius(spec, limit=limit, info=info)
    if isinstance(spec, S.Qian):
        return families.qian_family(spec.q, spec.r, limit=limit, info=info)
    if isinstance(spec, S.FiveCycle):
        return families.five_cycle_instance(limit=limit, info=info)
    b = Builder(limit)
    return b.group(b.lower(spec), info)


def make_frobenius(kernel: S.GroupSpec, complement: S.GroupSpec, action: S.Action,
                   limit: int = DEFAULT_LIMIT, info: dict | None = None) -> FiniteGroup:
    """Semidirect product with the complement checked to act fixed-point-freely."""
    b = Builder(limit)
    c = b._semidirect(kernel, complement, action, "$")
    G = b.group(c, {"frobenius": True, **(info or {})})
    _assert_fpf(G, "complement", "kernel")
    return G


def make_two_frobenius(spec: S.TwoFrobenius, limit: int = DEFAULT_LIMIT, info: dict | None = None) -> FiniteGroup:
    """bottom x| (middle x| top), checked layer by layer and then classified.

    Components: ``bottom`` (N), ``middle`` and ``top``; the chain is
    N < N.middle < G.
    """
    mb, tb = spec.middle_on_bottom, spec.top_on_bottom
    if (mb.prime, mb.dim) != (tb.prime, tb.dim):
        raise SpecError("$.top_on_bottom", "actions on the bottom layer use different fields")
    upper = S.Semidirect(spec.middle, spec.top, spec.top_on_middle)
    joint = S.MatrixAction(mb.prime, mb.dim, mb.matrices + tb.matrices)
    b = Builder(limit)
    c = b._semidirect(spec.bottom, upper, joint, "$")
    c = _rename(c, {"kernel": "bottom", "complement.kernel": "middle", "complement.complement": "top"})
    G = b.group(c, info)
    _assert_fpf(G, "middle", "bottom")
    _assert_fpf(G, "top", "middle")
    got = classify_frobenius(G)
    expected = spec.expected_type
    if expected is None:
        expected = tuple(_single_prime(G, n) for n in ("bottom", "middle", "top"))
    if got.kind != "two_frobenius" or tuple(got.type) != tuple(expected):
        raise StructureMismatch("expected a 2-Frobenius group of type %s, classified as %s"
                                % (tuple(expected), got.to_dict()))
    return G
