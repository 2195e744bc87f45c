"""Generalized-torsion engine over a group capability contract.

An element g is generalized torsion when some product of conjugates
g^{x_1} g^{x_2} ... g^{x_k} is the identity; the least such k is its
generalized order.  For a finitely generated abelian-by-finite group with
translation subgroup A, membership is decided through the abelianization
(the generalized torsion set is the full preimage of the torsion of G^ab),
certificates of length exactly [G:A] are constructed from transversals,
and the generalized exponent is bracketed between exp(G^ab) and [G:A].

Backends are duck-typed.  Any object providing identity/mul/inv/conj/pow,
a ``generators`` list of (name, element) pairs, and the lattice capability
methods (abelianization, ab_vector, in_translation, translation_index,
order_mod_translation, holonomy_exponent, labeled transversals) works;
operations that need a capability the backend lacks raise
BackendCapabilityError.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import BackendCapabilityError, GroupInputError, TheoremViolationError
from .intlin import IntMatrix, cokernel_structure
from .words import Comm, Conj, Gen, Ident, Mul, Pow, parse_word, print_word


def _backend_name(G) -> str:
    return getattr(G, "name", type(G).__name__)


def _require(G, *attrs):
    for attr in attrs:
        if not hasattr(G, attr):
            raise BackendCapabilityError(
                f"backend {_backend_name(G)!r} does not provide {attr!r}"
            )


# -- seeded randomness ----------------------------------------------------


class SplitMix64:
    """Deterministic 64-bit generator (splitmix finalizer scheme).

    State advances by the odd constant 0x9E3779B97F4B1715 and each output
    is finalized by two xor-shift-multiply rounds.  Used for every sampled
    check in the package so runs are reproducible from a single seed.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4B1715) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        return self.next_u64() % n


def random_word_element(G, rng: SplitMix64, max_length: int = 12):
    """Product of up to ``max_length`` random generators or inverses."""
    gens = [g for _, g in G.generators]
    out = G.identity()
    for _ in range(1 + rng.randrange(max_length)):
        pick = rng.randrange(2 * len(gens))
        letter = gens[pick >> 1]
        if pick & 1:
            letter = G.inv(letter)
        out = G.mul(out, letter)
    return out


# -- decision and bounds --------------------------------------------------


def is_generalized_torsion(G, g) -> bool:
    """True iff some product of conjugates of g is trivial.

    Decided through the abelianization: the generalized torsion set is the
    full preimage of the torsion subgroup of G^ab.
    """
    _require(G, "abelianization", "ab_vector")
    return G.abelianization().order_of(G.ab_vector(g)) is not None


def is_fully_generalized_torsion(G) -> bool:
    """True iff every element is generalized torsion (G^ab finite)."""
    _require(G, "abelianization")
    return G.abelianization().free_rank == 0


def gen_order_lower_bound(G, g) -> int:
    """Order of the image of g in G^ab; divides the generalized order."""
    _require(G, "abelianization", "ab_vector")
    o = G.abelianization().order_of(G.ab_vector(g))
    if o is None:
        raise GroupInputError(
            "element is not generalized torsion; no finite lower bound exists"
        )
    return o


@dataclass(frozen=True)
class ExponentBounds:
    lower: int
    upper: int
    exact: bool


def gen_exponent_bounds(G) -> ExponentBounds:
    """Bracket the generalized exponent: exp(G^ab) <= exp <= [G:A]."""
    _require(G, "abelianization", "translation_index")
    ab = G.abelianization()
    if not ab.is_finite:
        raise GroupInputError("generalized exponent bounds need a finite abelianization")
    lower = ab.exponent()
    upper = G.translation_index()
    return ExponentBounds(lower, upper, lower == upper)


# -- certificates ---------------------------------------------------------


@dataclass(frozen=True)
class WitnessCertificate:
    """A verified product of conjugates of ``base`` equal to the identity."""

    base: object
    conjugators: tuple
    words: tuple
    length: int
    verified: bool


def _verify_product(G, g, conjugators):
    out = G.identity()
    for x in conjugators:
        out = G.mul(out, G.conj(g, x))
    return out == G.identity()


def _power_word(base_word: str, i: int) -> str:
    if i == 1:
        return base_word
    tree = parse_word(base_word)
    if not isinstance(tree, (Gen, Ident)):
        tree = Mul((tree,))  # printed with parentheses
    return print_word(Pow(tree, i))


def witness_construct(G, g, base_word: str = "g") -> WitnessCertificate:
    """Certificate with conjugator list of length [G:A] (or k*[G:A]).

    Three constructions, all reduced to the fact that the product over a
    transversal of a translation is a central translation of finite order,
    hence trivial in a torsion-free lattice part:

    * g in A: conjugate by a full labeled transversal.
    * g outside A, G^ab finite: with n the order of gA, conjugate by
      g^i * s for s in a transversal of <gA> cosets and 0 <= i < n.
    * G^ab infinite: with k the order of gA, take the certificate of
      g^k in A and expand each conjugate (g^k)^s into k copies of g^s.

    The product is re-multiplied before returning; a nontrivial result
    raises TheoremViolationError since it contradicts the construction.
    """
    _require(G, "in_translation", "labeled_transversal", "labeled_transversal_mod")
    gen_order_lower_bound(G, g)  # raises when g is not generalized torsion
    ab_finite = G.abelianization().is_finite

    if G.in_translation(g):
        pairs = G.labeled_transversal()
        words = tuple(w for w, _ in pairs)
        conjugators = tuple(s for _, s in pairs)
    elif ab_finite:
        n = G.order_mod_translation(g)
        pairs = G.labeled_transversal_mod(g)
        words = []
        conjugators = []
        for w, s in pairs:
            for i in range(n):
                if i == 0:
                    words.append(w)
                    conjugators.append(s)
                else:
                    pw = _power_word(base_word, i)
                    words.append(pw if w == "1" else f"{pw}*{w}")
                    conjugators.append(G.mul(G.pow(g, i), s))
        words = tuple(words)
        conjugators = tuple(conjugators)
    else:
        k = G.order_mod_translation(g)
        pairs = G.labeled_transversal()
        words = tuple(w for w, _ in pairs for _ in range(k))
        conjugators = tuple(s for _, s in pairs for _ in range(k))

    if not _verify_product(G, g, conjugators):
        raise TheoremViolationError(
            "constructed witness product is not the identity; "
            "the transversal argument failed"
        )
    return WitnessCertificate(g, conjugators, words, len(conjugators), True)


# -- positive identities --------------------------------------------------


def positive_identity_witnesses(G):
    """Inner exponent k = exp(G/A) and transversal conjugators.

    The resulting identity (g^k)^{x_1} ... (g^k)^{x_m} = 1 holds for every
    g and has degree k * [G:A].
    """
    _require(G, "holonomy_exponent", "transversal")
    if not G.abelianization().is_finite:
        raise GroupInputError("positive identities need a finite abelianization")
    return G.holonomy_exponent(), list(G.transversal())


def verify_identity_universal(G, k: int, conjugators) -> bool:
    """Symbolic check that the identity holds for all elements at once."""
    _require(G, "verify_positive_identity_all")
    return G.verify_positive_identity_all(k, conjugators)


def verify_identity_sampled(G, k: int, conjugators, samples: int, seed: int) -> bool:
    """Evaluate the identity on seeded pseudorandom elements."""
    rng = SplitMix64(seed)
    for _ in range(samples):
        g = random_word_element(G, rng)
        if not _verify_product(G, G.pow(g, k), conjugators):
            return False
    return True


# -- bounded minimal-order search ----------------------------------------


def gen_order_search(G, g, max_k: int, radius: int):
    """Least k <= max_k with a trivial product of k conjugates, or None.

    Conjugators range over the ball of word length <= radius in the
    generators.  Levels are breadth-first products deduplicated by
    canonical form; only levels divisible by the abelianization lower
    bound are tested (smaller ones cannot reach the identity).  The
    returned certificate uses the lexicographically least conjugator
    sequence among minimal ones, given the fixed enumeration order.

    None means the search was exhausted, not that no identity exists.
    """
    _require(G, "abelianization", "ab_vector")
    if radius < 0:
        raise GroupInputError(f"radius must be >= 0, got {radius}")
    if max_k < 1:
        raise GroupInputError(f"max_k must be >= 1, got {max_k}")
    lb = G.abelianization().order_of(G.ab_vector(g))
    if lb is None:
        return None

    conjugates = _conjugate_set(G, g, radius)
    ident = G.identity()
    # parents[k-1][state] = (state at level k-1, conjugate index) for the
    # first (lexicographically least) way to reach state with k factors
    parents = []
    current = {ident: None}
    found_k = None
    for k in range(1, max_k + 1):
        nxt = {}
        for state in current:
            for i, (_, _, c) in enumerate(conjugates):
                p = G.mul(state, c)
                if p not in nxt:
                    nxt[p] = (state, i)
        parents.append(nxt)
        current = nxt
        if k % lb == 0 and ident in nxt:
            found_k = k
            break
    if found_k is None:
        return None

    path = []
    state = ident
    for k in range(found_k - 1, -1, -1):
        prev_state, idx = parents[k][state]
        path.append(idx)
        state = prev_state
    path.reverse()
    words = tuple(conjugates[i][0] for i in path)
    xs = tuple(conjugates[i][1] for i in path)
    if not _verify_product(G, g, xs):
        raise TheoremViolationError("search reconstruction does not multiply to the identity")
    return WitnessCertificate(g, xs, words, found_k, True)


def _generator_ball(G, radius: int):
    """Labeled ball of word length <= radius, breadth-first, deduplicated."""
    letters = []
    for name, e in G.generators:
        letters.append((name, e))
        letters.append((f"{name}^-1", G.inv(e)))
    seen = {G.identity(): "1"}
    frontier = [("1", G.identity())]
    out = [("1", G.identity())]
    for _ in range(radius):
        new_frontier = []
        for w, e in frontier:
            for lw, le in letters:
                p = G.mul(e, le)
                if p in seen:
                    continue
                pw = lw if w == "1" else f"{w}*{lw}"
                seen[p] = pw
                new_frontier.append((pw, p))
                out.append((pw, p))
        frontier = new_frontier
    return out


def _conjugate_set(G, g, radius: int):
    """Distinct conjugates g^x for x in the ball, first word wins."""
    out = []
    seen = set()
    for w, x in _generator_ball(G, radius):
        c = G.conj(g, x)
        if c in seen:
            continue
        seen.add(c)
        out.append((w, x, c))
    return out


# -- direct products ------------------------------------------------------


class DirectProductGroup:
    """Componentwise product of two backends, as a backend.

    Elements are pairs.  Generators of the right factor are renamed with a
    trailing "2" when they collide with the left factor's names.  Only the
    capabilities both factors share are exposed; in particular universal
    identity verification is not (use the extension-spec product for that).
    """

    def __init__(self, left, right, name: str | None = None):
        self.left = left
        self.right = right
        self.name = name or f"{_backend_name(left)} x {_backend_name(right)}"
        taken = {n for n, _ in left.generators}
        self._right_names = {}
        gens = [(n, (e, right.identity())) for n, e in left.generators]
        for n, e in right.generators:
            nn = n
            while nn in taken:
                nn += "2"
            taken.add(nn)
            self._right_names[n] = nn
            gens.append((nn, (left.identity(), e)))
        self.generators = tuple(gens)
        self._ab = None

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def mul(self, g, h):
        return (self.left.mul(g[0], h[0]), self.right.mul(g[1], h[1]))

    def inv(self, g):
        return (self.left.inv(g[0]), self.right.inv(g[1]))

    def conj(self, g, x):
        return (self.left.conj(g[0], x[0]), self.right.conj(g[1], x[1]))

    def pow(self, g, k):
        return (self.left.pow(g[0], k), self.right.pow(g[1], k))

    def abelianization(self):
        if self._ab is None:
            la = self.left.abelianization()
            ra = self.right.abelianization()
            moduli = list(la.moduli) + list(ra.moduli)
            self._ab = cokernel_structure(IntMatrix.diagonal(moduli, cols=len(moduli)))
        return self._ab

    def ab_vector(self, g):
        la = self.left.abelianization()
        ra = self.right.abelianization()
        return tuple(la.canonical(self.left.ab_vector(g[0]))) + tuple(
            ra.canonical(self.right.ab_vector(g[1]))
        )

    def in_translation(self, g) -> bool:
        return self.left.in_translation(g[0]) and self.right.in_translation(g[1])

    def translation_index(self) -> int:
        return self.left.translation_index() * self.right.translation_index()

    def order_mod_translation(self, g) -> int:
        return lcm(
            self.left.order_mod_translation(g[0]),
            self.right.order_mod_translation(g[1]),
        )

    def holonomy_exponent(self) -> int:
        return lcm(self.left.holonomy_exponent(), self.right.holonomy_exponent())

    def is_torsion_free(self) -> bool:
        return self.left.is_torsion_free() and self.right.is_torsion_free()

    def _rename_right_word(self, w: str) -> str:
        if w == "1" or not self._right_names:
            return w
        return print_word(_rename(parse_word(w), self._right_names))

    def labeled_transversal(self):
        out = []
        for lw, ls in self.left.labeled_transversal():
            for rw, rs in self.right.labeled_transversal():
                rw = self._rename_right_word(rw)
                if lw == "1":
                    word = rw
                elif rw == "1":
                    word = lw
                else:
                    word = f"{lw}*{rw}"
                out.append((word, (ls, rs)))
        return out

    def transversal(self):
        return [s for _, s in self.labeled_transversal()]

    def _coset_index(self, e, pairs):
        for i, (_, t) in enumerate(pairs):
            if self.in_translation(self.mul(self.inv(t), e)):
                return i
        raise GroupInputError("element lies in no transversal coset")

    def labeled_transversal_mod(self, g):
        pairs = self.labeled_transversal()
        n = self.order_mod_translation(g)
        covered = set()
        out = []
        for w, s in pairs:
            idx = self._coset_index(s, pairs)
            if idx in covered:
                continue
            out.append((w, s))
            acc = s
            for _ in range(n):
                covered.add(self._coset_index(acc, pairs))
                acc = self.mul(g, acc)
        return out


def _rename(node, mapping):
    if isinstance(node, Gen):
        return Gen(mapping.get(node.name, node.name))
    if isinstance(node, Ident):
        return node
    if isinstance(node, Mul):
        return Mul(tuple(_rename(f, mapping) for f in node.factors))
    if isinstance(node, Pow):
        return Pow(_rename(node.base, mapping), node.exp)
    if isinstance(node, Conj):
        return Conj(_rename(node.base, mapping), _rename(node.by, mapping))
    return Comm(_rename(node.left, mapping), _rename(node.right, mapping))
