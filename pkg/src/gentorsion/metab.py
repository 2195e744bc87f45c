"""Collection backend for the metabelian groups K(p^n, p^m).

Elements have the normal form x^alpha y^beta c^v with c = [x, y] =
x^-1 y^-1 x y.  The commutator exponent v lives in a finitely presented
module M over the group ring Z[C_{p^n} x C_{p^m}]: conjugation by x and y
acts as multiplication by the ring generators X and Y, and the defining
relators [[x,y], x^{p^n}] and [[x,y], y^{p^m}] are absorbed by the ring
relations X^{p^n} = 1 and Y^{p^m} = 1.

Collection rests on one master identity,

    [x^a, y^b] = c^{Psi_a(X) Psi_b(Y)},   Psi_k(T) = 1 + T + ... + T^{k-1},

extended to negative exponents by Psi_{-a}(T) = -T^{-a} Psi_a(T).  Writing
N = p^{n+m}, the power relators of the presentation collapse x^N and y^N
into commutator words: x^N = c^{g3} and y^N = c^{g4}, where g3 and g4 are
computed here by collecting the relators, not hard-coded.  The relation
submodule S is likewise computed mechanically, as the module closure of
the consistency vectors obtained by conjugating both power relations by
each generator and comparing the two ways of evaluating the result.

Ring elements are plain integer tuples of length d = p^{n+m}, indexed by
(i, j) -> i * p^m + j for the monomial X^i Y^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

from .errors import GroupInputError, TheoremViolationError
from .intlin import IntMatrix, cokernel_structure, smith_normal_form, solve_integer_linear


@dataclass(frozen=True)
class MetabElement:
    key: tuple
    alpha: int
    beta: int
    coords: tuple
    raw: tuple = field(compare=False, repr=False)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class MetabGroup:
    """The group K(p^n, p^m) with exact normal-form arithmetic."""

    def __init__(self, p: int, n: int, m: int, size_cap: int = 256):
        if not _is_prime(p):
            raise GroupInputError(f"p must be prime, got {p}")
        if n < 1 or m < 1:
            raise GroupInputError("n and m must be at least 1")
        self.p, self.n_exp, self.m_exp = p, n, m
        self.qn = p**n
        self.qm = p**m
        self.N = p ** (n + m)
        if self.N > size_cap:
            raise GroupInputError(f"p^(n+m) = {self.N} exceeds the size cap {size_cap}")
        self.d = self.qn * self.qm
        self.key = (p, n, m)
        self.name = f"K:{p},{n},{m}"
        self._zero = (0,) * self.d

        # power relations x^N = c^{g3}, y^N = c^{g4}, by unreduced collection
        # of the relators (x^{qn})^{Psi_{qm}(y)} and (y^{qm})^{Psi_{qn}(x)}
        self.g3 = self._neg(self._relator_tail("x"))
        self.g4 = self._neg(self._relator_tail("y"))

        self._module_rows = self._consistency_rows()
        self.module = cokernel_structure(self._module_rows)
        if self.module.invariant_factors:
            raise TheoremViolationError(
                f"commutator module of K({self.qn},{self.qm}) has torsion "
                f"{self.module.invariant_factors}; the group would not be torsion-free"
            )
        norm = self._psi_product(self.qn, self.qm)
        if not self.in_relation_submodule(norm):
            raise TheoremViolationError(
                "x^{p^n} and y^{p^m} do not commute; the translation subgroup is not abelian"
            )

        self.generators = (
            ("x", self._make(1, 0, self._zero)),
            ("y", self._make(0, 1, self._zero)),
        )
        self._ab = None
        self._torsion = None
        self._center = None

    # -- ring helpers (vectors over the monomial basis X^i Y^j) -------------

    def _shift(self, v, a: int, b: int):
        a %= self.qn
        b %= self.qm
        out = [0] * self.d
        for i in range(self.qn):
            row = ((i + a) % self.qn) * self.qm
            src = i * self.qm
            for j in range(self.qm):
                out[row + (j + b) % self.qm] = v[src + j]
        return tuple(out)

    @staticmethod
    def _add(u, v):
        return tuple(x + y for x, y in zip(u, v))

    @staticmethod
    def _neg(v):
        return tuple(-x for x in v)

    @staticmethod
    def _scale(v, k: int):
        return tuple(k * x for x in v)

    def _psi_x(self, a: int):
        """Psi_a(X) as a one-variable coefficient list of length qn."""
        if a >= 0:
            base, extra = divmod(a, self.qn)
            return [base + 1 if i < extra else base for i in range(self.qn)]
        pos = self._psi_x(-a)
        shifted = [pos[(i - a) % self.qn] for i in range(self.qn)]
        return [-x for x in shifted]

    def _psi_y(self, b: int):
        if b >= 0:
            base, extra = divmod(b, self.qm)
            return [base + 1 if j < extra else base for j in range(self.qm)]
        pos = self._psi_y(-b)
        shifted = [pos[(j - b) % self.qm] for j in range(self.qm)]
        return [-x for x in shifted]

    def _psi_product(self, a: int, b: int):
        """Psi_a(X) * Psi_b(Y) as a ring vector."""
        px, py = self._psi_x(a), self._psi_y(b)
        out = [0] * self.d
        for i in range(self.qn):
            if px[i]:
                row = i * self.qm
                for j in range(self.qm):
                    out[row + j] = px[i] * py[j]
        return tuple(out)

    def monomial(self, i: int, j: int):
        out = [0] * self.d
        out[(i % self.qn) * self.qm + (j % self.qm)] = 1
        return tuple(out)

    def _mult_matrix(self, r) -> IntMatrix:
        """Matrix of ring multiplication v -> r * v (columns are shifts)."""
        cols = []
        for i in range(self.qn):
            for j in range(self.qm):
                cols.append(self._shift(r, i, j))
        return IntMatrix([[cols[c][row] for c in range(self.d)] for row in range(self.d)], cols=self.d)

    # -- unreduced collection (no power folding; used to derive g3, g4, S) --

    def _raw_mul(self, g1, g2):
        a1, b1, v1 = g1
        a2, b2, v2 = g2
        v = self._add(self._shift(v1, a2, b2), v2)
        psi = self._psi_product2(a2, b1)
        if psi is not None:
            v = self._add(v, self._neg(self._shift(psi, 0, b2)))
        return (a1 + a2, b1 + b2, v)

    def _psi_product2(self, a: int, b: int):
        if a == 0 or b == 0:
            return None
        return self._psi_product(a, b)

    def _raw_inv(self, g):
        a, b, v = g
        out = self._neg(self._shift(v, -a, -b))
        psi = self._psi_product2(-a, b)
        if psi is not None:
            out = self._add(out, self._shift(psi, 0, -b))
        return (-a, -b, out)

    def _raw_conj(self, g, x):
        return self._raw_mul(self._raw_mul(self._raw_inv(x), g), x)

    def _raw_pow(self, g, k: int):
        out = (0, 0, self._zero)
        for _ in range(abs(k)):
            out = self._raw_mul(out, g)
        return out if k >= 0 else self._raw_inv(out)

    def collect_unreduced(self, word):
        """Collect a word over {x, y, c} without applying power relations.

        This is arithmetic in the cover where only the ring relations hold,
        so x- and y-exponents stay plain integers.  Used by the build steps
        and as an independent cross-check target in tests.
        """
        out = (0, 0, self._zero)
        for name, exp in word:
            if name == "x":
                out = self._raw_mul(out, (exp, 0, self._zero))
            elif name == "y":
                out = self._raw_mul(out, (0, exp, self._zero))
            elif name == "c":
                out = self._raw_mul(out, (0, 0, self._scale(self.monomial(0, 0), exp)))
            else:
                raise GroupInputError(f"unknown generator {name!r}")
        return out

    def _relator_tail(self, letter: str):
        """Commutator part of the collected relator for x (or y).

        For x: collect prod_{j < qm} (x^{qn})^{y^j}, which the presentation
        forces to be trivial; the result is (N, 0, w), so x^N = c^{-w}.
        """
        if letter == "x":
            base = (self.qn, 0, self._zero)
            out = (0, 0, self._zero)
            for j in range(self.qm):
                out = self._raw_mul(out, self._raw_conj(base, (0, j, self._zero)))
            a, b, w = out
            assert (a, b) == (self.N, 0)
        else:
            base = (0, self.qm, self._zero)
            out = (0, 0, self._zero)
            for i in range(self.qn):
                out = self._raw_mul(out, self._raw_conj(base, (i, 0, self._zero)))
            a, b, w = out
            assert (a, b) == (0, self.N)
        return w

    def _consistency_rows(self) -> IntMatrix:
        """Module generators of the relation submodule S.

        For each power relation (x^N = c^{g3}, y^N = c^{g4}) and each
        generator u, conjugating the left side letter by letter gives
        (x^u)^N = x^N c^{w}; substituting the relation on both sides forces
        g + w - g * U to die in M.  S is the closure of these four vectors
        under the X and Y shifts.
        """
        vectors = []
        x, y = (1, 0, self._zero), (0, 1, self._zero)
        for base, g in ((x, self.g3), (y, self.g4)):
            for u, (ui, uj) in ((x, (1, 0)), (y, (0, 1))):
                a, b, w = self._raw_pow(self._raw_conj(base, u), self.N)
                assert (a % self.N, b % self.N) == (0, 0)
                vec = self._add(self._add(g, w), self._neg(self._shift(g, ui, uj)))
                vectors.append(vec)
        rows = []
        for vec in vectors:
            for i in range(self.qn):
                for j in range(self.qm):
                    rows.append(list(self._shift(vec, i, j)))
        return IntMatrix(rows, cols=self.d)

    def in_relation_submodule(self, v) -> bool:
        return solve_integer_linear(self._module_rows.transpose(), v) is not None

    # -- normal forms -------------------------------------------------------

    def _make(self, alpha: int, beta: int, v) -> MetabElement:
        """Fold exponents into [0, N) and reduce v to canonical coordinates.

        Folding x^N picks up c^{g3} conjugated past the pending y^beta, so
        the shift uses beta before its own reduction.
        """
        k, alpha = divmod(alpha, self.N)
        if k:
            v = self._add(v, self._scale(self._shift(self.g3, 0, beta), k))
        l, beta = divmod(beta, self.N)
        if l:
            v = self._add(v, self._scale(self.g4, l))
        return MetabElement(self.key, alpha, beta, self.module.canonical(v), v)

    def identity(self) -> MetabElement:
        return self._make(0, 0, self._zero)

    def _check(self, g: MetabElement):
        if g.key != self.key:
            raise GroupInputError(f"element of K{g.key} used in K{self.key}")

    def mul(self, g: MetabElement, h: MetabElement) -> MetabElement:
        self._check(g)
        self._check(h)
        v = self._add(self._shift(g.raw, h.alpha, h.beta), h.raw)
        psi = self._psi_product2(h.alpha, g.beta)
        if psi is not None:
            v = self._add(v, self._neg(self._shift(psi, 0, h.beta)))
        return self._make(g.alpha + h.alpha, g.beta + h.beta, v)

    def inv(self, g: MetabElement) -> MetabElement:
        self._check(g)
        a, b, v = self._raw_inv((g.alpha, g.beta, g.raw))
        return self._make(a, b, v)

    def conj(self, g: MetabElement, x: MetabElement) -> MetabElement:
        return self.mul(self.mul(self.inv(x), g), x)

    def pow(self, g: MetabElement, k: int) -> MetabElement:
        if k < 0:
            return self.inv(self.pow(g, -k))
        out = self.identity()
        base = g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def collect(self, word) -> MetabElement:
        """Normal form of a word given as (generator, exponent) pairs.

        Generators are "x", "y", and "c"; exponents are arbitrary integers.
        """
        out = self.identity()
        for name, exp in word:
            if name == "x":
                step = self._make(exp, 0, self._zero)
            elif name == "y":
                step = self._make(0, exp, self._zero)
            elif name == "c":
                step = self._make(0, 0, self._scale(self.monomial(0, 0), exp))
            else:
                raise GroupInputError(f"unknown generator {name!r}")
            out = self.mul(out, step)
        return out

    def commutator_element(self, v) -> MetabElement:
        """The element c^v for a ring vector v."""
        return self._make(0, 0, tuple(v))

    # -- capability contract ------------------------------------------------

    def in_translation(self, g: MetabElement) -> bool:
        self._check(g)
        return g.alpha % self.qn == 0 and g.beta % self.qm == 0

    def translation_index(self) -> int:
        return self.N

    def order_mod_translation(self, g: MetabElement) -> int:
        a = g.alpha % self.qn
        b = g.beta % self.qm
        return lcm(self.qn // gcd(self.qn, a), self.qm // gcd(self.qm, b))

    def holonomy_exponent(self) -> int:
        return lcm(self.qn, self.qm)

    def transversal(self):
        return [elem for _, elem in self.labeled_transversal()]

    def labeled_transversal(self):
        out = []
        for i in range(self.qn):
            for j in range(self.qm):
                word = "1" if i == 0 and j == 0 else _xy_word(i, j)
                out.append((word, self._make(i, j, self._zero)))
        return out

    def labeled_transversal_mod(self, g: MetabElement):
        step = (g.alpha % self.qn, g.beta % self.qm)
        cyc = [(0, 0)]
        cur = step
        while cur != (0, 0):
            cyc.append(cur)
            cur = ((cur[0] + step[0]) % self.qn, (cur[1] + step[1]) % self.qm)
        covered = set()
        out = []
        for word, elem in self.labeled_transversal():
            pt = (elem.alpha, elem.beta)
            if pt in covered:
                continue
            out.append((word, elem))
            covered.update(((c[0] + pt[0]) % self.qn, (c[1] + pt[1]) % self.qm) for c in cyc)
        return out

    def abelianization(self):
        if self._ab is None:
            self._ab = cokernel_structure(IntMatrix.diagonal([self.N, self.N]))
        return self._ab

    def ab_vector(self, g: MetabElement) -> tuple:
        return (g.alpha, g.beta)

    def hirsch_length(self) -> int:
        return self.module.free_rank

    # -- torsion and center -------------------------------------------------

    def _affine_mul(self, f1, f2):
        """Product of x^a y^b c^{m v + c} forms sharing one formal slot v.

        m is a ring element acting by multiplication; folding contributes
        only to the constant part.
        """
        a1, b1, m1, c1 = f1
        a2, b2, m2, c2 = f2
        m = self._add(self._shift(m1, a2, b2), m2)
        c = self._add(self._shift(c1, a2, b2), c2)
        psi = self._psi_product2(a2, b1)
        if psi is not None:
            c = self._add(c, self._neg(self._shift(psi, 0, b2)))
        a, b = a1 + a2, b1 + b2
        k, a = divmod(a, self.N)
        if k:
            c = self._add(c, self._scale(self._shift(self.g3, 0, b), k))
        l, b = divmod(b, self.N)
        if l:
            c = self._add(c, self._scale(self.g4, l))
        return (a, b, m, c)

    def _affine_concrete(self, g: MetabElement):
        return (g.alpha, g.beta, self._zero, g.raw)

    def is_torsion_free(self) -> bool:
        """Exact torsion test over all nontrivial exponent residues.

        For g = x^a y^b c^v with (a, b) of order o in C_N x C_N, the power
        g^o is c^{m v + c} with m, c tracked symbolically; g has finite
        order exactly when m v = -c is solvable modulo S.
        """
        if self._torsion is None:
            self._torsion = self._find_torsion()
        return self._torsion == "free"

    def torsion_witness(self):
        if self._torsion is None:
            self._torsion = self._find_torsion()
        return None if self._torsion == "free" else self._torsion

    def _find_torsion(self):
        unit = self.monomial(0, 0)
        srows = self._module_rows.transpose()
        for a in range(self.N):
            for b in range(self.N):
                if (a, b) == (0, 0):
                    continue
                o = lcm(self.N // gcd(self.N, a), self.N // gcd(self.N, b))
                g = (a, b, unit, self._zero)
                acc = (0, 0, self._zero, self._zero)
                for _ in range(o):
                    acc = self._affine_mul(acc, g)
                ra, rb, m, c = acc
                assert (ra, rb) == (0, 0)
                system = self._mult_matrix(m)
                stacked = IntMatrix(
                    [list(system.row(i)) + list(srows.row(i)) for i in range(self.d)],
                    cols=self.d + srows.cols,
                )
                sol = solve_integer_linear(stacked, self._neg(c))
                if sol is not None:
                    return self._make(a, b, tuple(sol[: self.d]))
        return "free"

    def has_trivial_center(self) -> bool:
        """True iff the center is trivial.

        Central elements lie in the translation subgroup (it is maximal
        abelian), so only residues with qn | alpha and qm | beta need
        checking; within the commutator module the fixed sublattice under
        both shifts must vanish.
        """
        if self._center is None:
            self._center = self._check_center()
        return self._center

    def _check_center(self) -> bool:
        unit = self.monomial(0, 0)
        ident = IntMatrix.identity(self.d)
        x = self.generators[0][1]
        y = self.generators[1][1]
        srows = self._module_rows.transpose()
        s_rank = self.d - self.module.free_rank

        # fixed sublattice of M under both shifts (the (0,0) residue)
        proj = self.module.to_canonical
        bx = proj @ (self._mult_matrix(self.monomial(1, 0)) - ident)
        by = proj @ (self._mult_matrix(self.monomial(0, 1)) - ident)
        diag = smith_normal_form(bx.vstack(by)).diagonal()
        kernel_rank = self.d - sum(1 for dd in diag if dd != 0)
        if kernel_rank != s_rank:
            return False

        for a in range(0, self.N, self.qn):
            for b in range(0, self.N, self.qm):
                if (a, b) == (0, 0):
                    continue
                g = (a, b, unit, self._zero)
                rows = []
                rhs = []
                for w in (x, y):
                    f = self._affine_mul(self._affine_mul(self._affine_concrete(self.inv(w)), g), self._affine_concrete(w))
                    fa, fb, m, c = f
                    assert (fa, fb) == (a, b)
                    block = self._mult_matrix(m) - ident
                    for i in range(self.d):
                        pad_left = list(srows.row(i)) if w is x else [0] * srows.cols
                        pad_right = list(srows.row(i)) if w is y else [0] * srows.cols
                        rows.append(list(block.row(i)) + pad_left + pad_right)
                    rhs.extend(-t for t in c)
                system = IntMatrix(rows, cols=self.d + 2 * srows.cols)
                if solve_integer_linear(system, rhs) is not None:
                    return False
        return True


def _xy_word(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def build_K(p: int, n: int, m: int, size_cap: int = 256) -> MetabGroup:
    """Construct K(p^n, p^m); raises GroupInputError on bad parameters."""
    return MetabGroup(p, n, m, size_cap=size_cap)
