"""Constructors for the example groups.

Three crystallographic specs ship as JSON data files (infinite dihedral,
Klein bottle, Promislow), the K(p^n, p^m) family delegates to the
collection backend, wreath products Z wr Q and free abelianized extensions
F/[R,R] are built from a finite multiplication table, and the group-ring
backend Gamma = (ZP) x| (P x P) supports sampled identity checking on a
group that is not abelian-by-finite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import GroupInputError, TheoremViolationError
from .extgroup import (
    ExtElement,
    ExtensionGroup,
    ExtensionSpec,
    spec_from_dict,
    validate_extension,
)
from .intlin import IntMatrix
from .metab import MetabGroup, build_K


def _load_spec(filename: str) -> ExtensionSpec:
    text = resources.files("gentorsion").joinpath("data").joinpath(filename).read_text()
    return spec_from_dict(json.loads(text))


def build_dihedral_infinite() -> ExtensionSpec:
    """D_inf = <a, b | b^2 = 1, a^b = a^-1> as Z by C2."""
    return _load_spec("dinf.json")


def build_klein_bottle() -> ExtensionSpec:
    """Klein bottle group <x, y | x^y = x^-1> as Z^2 by C2."""
    return _load_spec("klein.json")


def build_promislow() -> ExtensionSpec:
    """The Promislow group: Z^3 by C2 x C2, torsion-free, G^ab = C4 x C4."""
    return _load_spec("promislow.json")


def build_K_group(p: int, n: int, m: int, size_cap: int = 256) -> MetabGroup:
    return build_K(p, n, m, size_cap=size_cap)


def build_wreath(q_table) -> ExtensionSpec:
    """Z wr Q for a finite group Q given by its multiplication table.

    The lattice is ZQ with the regular permutation action e_h -> e_{hq};
    the extension splits, so the cocycle is zero.  Generators: ``t`` for
    the basis translation at the identity and ``s<i>`` for each
    nonidentity element of Q.
    """
    table = [list(map(int, row)) for row in q_table]
    n = len(table)
    phi = []
    for q in range(n):
        mat = [[0] * n for _ in range(n)]
        for h in range(n):
            mat[table[h][q]][h] = 1
        phi.append(mat)
    zero = [0] * n
    coc = [[list(zero) for _ in range(n)] for _ in range(n)]
    t = [0] * n
    t[0] = 1
    generators = [("t", (0, t))]
    for q in range(1, n):
        generators.append((f"s{q}", (q, list(zero))))
    spec = ExtensionSpec.build(table, phi, coc, generators)
    report = validate_extension(spec)
    if not report.ok:
        raise GroupInputError("invalid multiplication table: " + "; ".join(report.failures[:3]))
    return spec


@dataclass(frozen=True)
class FreeAbelExtInput:
    """Free rank, finite target Q as a table, and the generator images."""

    rank: int
    q_table: tuple
    images: tuple

    @classmethod
    def build(cls, rank: int, q_table, images) -> "FreeAbelExtInput":
        table = tuple(tuple(int(x) for x in row) for row in q_table)
        return cls(int(rank), table, tuple(int(i) for i in images))


def build_free_abelianized_extension(inp: FreeAbelExtInput) -> ExtensionSpec:
    """F/[R,R] for F free of rank r and R the kernel of F ->> Q.

    The lattice is R/[R,R], free abelian on the non-tree Schreier
    generators (rank |Q|(r-1)+1).  Transversal words come from a
    breadth-first Schreier tree; the point action and cocycle are obtained
    by pushing W_q^-1 b W_q and W_{qq'}^-1 W_q W_{q'} through the Schreier
    rewriting map and abelianizing.
    """
    r = inp.rank
    table = inp.q_table
    size = len(table)
    if r < 1:
        raise GroupInputError("free rank must be at least 1")
    if len(inp.images) != r:
        raise GroupInputError("need exactly one image per free generator")
    for q in inp.images:
        if not 0 <= q < size:
            raise GroupInputError("generator image outside the group")
    inverse = [row.index(0) for row in table]

    # breadth-first Schreier tree; transversal words as (gen, +-1) lists
    words = {0: ()}
    order = [0]
    frontier = [0]
    while frontier:
        nxt = []
        for q in frontier:
            for i, img in enumerate(inp.images):
                for sgn, target in ((1, table[q][img]), (-1, table[q][inverse[img]])):
                    if target not in words:
                        words[target] = words[q] + ((i, sgn),)
                        order.append(target)
                        nxt.append(target)
        frontier = nxt
    if len(words) != size:
        raise GroupInputError("generator images do not generate the target group")

    tree_edges = set()
    for q in order[1:]:
        prefix = words[q][:-1]
        src = 0
        for i, sgn in prefix:
            src = table[src][inp.images[i]] if sgn == 1 else table[src][inverse[inp.images[i]]]
        i, sgn = words[q][-1]
        tree_edges.add((src, i) if sgn == 1 else (q, i))

    schreier = []
    index = {}
    for q in range(size):
        for i in range(r):
            if (q, i) not in tree_edges:
                index[(q, i)] = len(schreier)
                schreier.append((q, i))
    rank = len(schreier)
    if rank != size * (r - 1) + 1:
        raise TheoremViolationError(
            f"Schreier generator count {rank} differs from |Q|(r-1)+1 = {size * (r - 1) + 1}"
        )

    def rewrite(word):
        """Abelianized Schreier rewriting; returns (vector, end coset)."""
        vec = [0] * rank
        q = 0
        for i, sgn in word:
            if sgn == 1:
                edge = (q, i)
                q = table[q][inp.images[i]]
                if edge in index:
                    vec[index[edge]] += 1
            else:
                q = table[q][inverse[inp.images[i]]]
                edge = (q, i)
                if edge in index:
                    vec[index[edge]] -= 1
        return vec, q

    def inv_word(word):
        return tuple((i, -sgn) for i, sgn in reversed(word))

    phi = []
    for q in range(size):
        cols = []
        for b_q, b_i in schreier:
            # b as a word: W_{b_q} f_i W_{target}^-1
            target = table[b_q][inp.images[b_i]]
            b_word = words[b_q] + ((b_i, 1),) + inv_word(words[target])
            conj = inv_word(words[q]) + b_word + words[q]
            vec, end = rewrite(conj)
            if end != 0:
                raise TheoremViolationError("conjugated Schreier generator left the kernel")
            cols.append(vec)
        phi.append([[cols[j][i] for j in range(rank)] for i in range(rank)])

    coc = []
    for q1 in range(size):
        row = []
        for q2 in range(size):
            walk = words[q1] + words[q2]
            q12 = 0
            for i, sgn in walk:
                q12 = table[q12][inp.images[i]] if sgn == 1 else table[q12][inverse[inp.images[i]]]
            vec, end = rewrite(inv_word(words[q12]) + walk)
            if end != 0:
                raise TheoremViolationError("cocycle word left the kernel")
            row.append(vec)
        coc.append(row)

    generators = []
    for i, img in enumerate(inp.images):
        vec, end = rewrite(inv_word(words[img]) + ((i, 1),))
        if end != 0:
            raise TheoremViolationError("generator decomposition left the kernel")
        generators.append((f"f{i + 1}", (img, vec)))

    spec = ExtensionSpec.build(table, phi, coc, generators)
    report = validate_extension(spec)
    if not report.ok:
        raise TheoremViolationError(
            "Schreier construction produced an invalid extension: "
            + "; ".join(report.failures[:3])
        )
    return spec


# -- group-ring backend ---------------------------------------------------


@dataclass(frozen=True)
class GroupRingElement:
    """Finite-support integer combination of group elements (sorted items)."""

    items: tuple

    @classmethod
    def from_pairs(cls, pairs) -> "GroupRingElement":
        acc = {}
        for key, coeff in pairs:
            acc[key] = acc.get(key, 0) + coeff
        return cls(tuple(sorted((k, c) for k, c in acc.items() if c)))

    def scaled(self, k: int) -> "GroupRingElement":
        if k == 0:
            return GroupRingElement(())
        return GroupRingElement(tuple((key, k * c) for key, c in self.items))

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement.from_pairs(self.items + other.items)

    def augmentation(self) -> int:
        return sum(c for _, c in self.items)


@dataclass(frozen=True)
class GammaElement:
    ring: GroupRingElement
    g: ExtElement
    h: ExtElement


class CasoloGroup:
    """Gamma = (ZP) x| (P x P) over the Promislow group P.

    The left P-factor acts on ZP by translation, the right one through the
    sign character (a fixed surjection P -> {+-1}).  This backend is not
    abelian-by-finite, so it deliberately omits the lattice capabilities;
    it supports exact arithmetic and sampled identity checks.
    """

    def __init__(self):
        self.P = ExtensionGroup(build_promislow(), name="promislow")
        self.name = "gamma"
        ab = self.P.abelianization()
        self._sign_coord = 0
        if all(
            ab.canonical(self.P.ab_vector(g))[0] % 2 == 0 for _, g in self.P.generators
        ):
            # first coordinate not surjective onto C2; fall back to the second
            self._sign_coord = 1
        if all(
            ab.canonical(self.P.ab_vector(g))[self._sign_coord] % 2 == 0
            for _, g in self.P.generators
        ):
            raise TheoremViolationError("no generator maps onto the sign character")
        delta = GroupRingElement.from_pairs([(self.P.identity(), 1)])
        one = self.P.identity()
        x = dict(self.P.generators)["x"]
        y = dict(self.P.generators)["y"]
        self.generators = (
            ("e", GammaElement(delta, one, one)),
            ("xl", GammaElement(GroupRingElement(()), x, one)),
            ("yl", GammaElement(GroupRingElement(()), y, one)),
            ("xr", GammaElement(GroupRingElement(()), one, x)),
            ("yr", GammaElement(GroupRingElement(()), one, y)),
        )

    def sign(self, h: ExtElement) -> int:
        ab = self.P.abelianization()
        return -1 if ab.canonical(self.P.ab_vector(h))[self._sign_coord] % 2 else 1

    def _translate(self, g: ExtElement, r: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(
            tuple(sorted((self.P.mul(g, key), c) for key, c in r.items))
        )

    def identity(self) -> GammaElement:
        return GammaElement(GroupRingElement(()), self.P.identity(), self.P.identity())

    def mul(self, a: GammaElement, b: GammaElement) -> GammaElement:
        ring = a.ring + self._translate(a.g, b.ring).scaled(self.sign(a.h))
        return GammaElement(ring, self.P.mul(a.g, b.g), self.P.mul(a.h, b.h))

    def inv(self, a: GammaElement) -> GammaElement:
        gi = self.P.inv(a.g)
        hi = self.P.inv(a.h)
        ring = self._translate(gi, a.ring).scaled(-self.sign(hi))
        return GammaElement(ring, gi, hi)

    def conj(self, a: GammaElement, x: GammaElement) -> GammaElement:
        return self.mul(self.mul(self.inv(x), a), x)

    def pow(self, a: GammaElement, k: int) -> GammaElement:
        if k < 0:
            return self.inv(self.pow(a, -k))
        out = self.identity()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def sigma_candidates(self):
        """Pair-part elements (1, h) with sign(h) = -1, three choices."""
        x = dict(self.P.generators)["x"]
        y = dict(self.P.generators)["y"]
        hs = [x, self.P.inv(x), self.P.mul(x, self.P.mul(y, y))]
        out = []
        for h in hs:
            if self.sign(h) != -1:
                raise TheoremViolationError("sigma candidate does not invert the sign")
            out.append(GammaElement(GroupRingElement(()), self.P.identity(), h))
        return out

    def identity_conjugators(self, sigma: GammaElement):
        """The degree-16 conjugator list: 8 diagonal pairs, then the same
        8 followed by sigma.

        The diagonal list realizes the degree-8 positive identity of P in
        both factors, so the first half of the product is a pure ring
        element fixed by the diagonal; sigma flips its sign and the two
        halves cancel.
        """
        x = dict(self.P.generators)["x"]
        y = dict(self.P.generators)["y"]
        one = self.P.identity()
        zs = [one, one, x, x, y, y, self.P.mul(x, y), self.P.mul(x, y)]
        base = [GammaElement(GroupRingElement(()), z, z) for z in zs]
        return base + [self.mul(b, sigma) for b in base]


def build_casolo_gamma() -> CasoloGroup:
    return CasoloGroup()


# -- central elements in products ----------------------------------------


def trivial_z_spec() -> ExtensionSpec:
    """Rank-1 lattice with trivial point group; generator ``z``."""
    return ExtensionSpec.build([[0]], [[[1]]], [[[0]]], [("z", (0, [1]))])


def central_nontorsion_check(G) -> bool:
    """True iff the central generator added last is NOT generalized torsion.

    Expects a product backend whose final generator spans a central Z
    factor; a central element can only be generalized torsion if it is
    torsion, so the correct report is always "not generalized torsion".
    """
    from .gentor import is_generalized_torsion

    z = G.generators[-1][1]
    return not is_generalized_torsion(G, z)
