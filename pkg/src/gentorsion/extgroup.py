"""Abelian-by-finite groups presented by point-group data.

A group here is an extension 1 -> Z^n -> G -> Q -> 1: a finite point group
Q (multiplication table over indices 0..|Q|-1, with 0 the identity) acting
on a rank-n lattice through matrices phi(q), glued by a normalized factor
set coc(q, q').  Elements are pairs (q, a) with a an integer n-vector, and

    (q, a) * (q', a') = (q q', coc(q, q') + phi(q') a + a').

phi follows the anti-homomorphism convention phi(q q') = phi(q') phi(q), so
conjugating a translation (0, a) by any element with point part q gives
(0, phi(q) a).  The identity is (0, 0) and

    (q, a)^-1 = (q^-1, -coc(q, q^-1) - phi(q^-1) a).

Everything downstream (torsion tests, abelianization, certificates) is
phrased against this one convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import NamedTuple

from .errors import GroupInputError
from .intlin import IntMatrix, cokernel_structure, smith_normal_form, solve_integer_linear
from .words import run_word


class ExtElement(NamedTuple):
    q: int
    a: tuple


def _vec(v) -> tuple:
    return tuple(int(x) for x in v)


def _vadd(u, v) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def _vneg(v) -> tuple:
    return tuple(-x for x in v)


@dataclass(frozen=True)
class ExtensionSpec:
    q_size: int
    q_table: tuple
    n: int
    phi: tuple
    coc: tuple
    generator_names: tuple

    @classmethod
    def build(cls, q_table, phi, coc, generators) -> "ExtensionSpec":
        """Normalize plain lists into an immutable spec.

        ``phi`` is a list of n x n matrices (lists or IntMatrix), ``coc`` a
        q_size x q_size array of n-vectors, ``generators`` an ordered list
        of (name, (q, a)) pairs.
        """
        table = tuple(tuple(int(x) for x in row) for row in q_table)
        q_size = len(table)
        mats = tuple(m if isinstance(m, IntMatrix) else IntMatrix(m) for m in phi)
        n = mats[0].rows if mats else 0
        cocs = tuple(tuple(_vec(v) for v in row) for row in coc)
        gens = tuple((str(name), ExtElement(int(q), _vec(a))) for name, (q, a) in generators)
        return cls(q_size, table, n, mats, cocs, gens)


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_extension(spec: ExtensionSpec) -> ValidationReport:
    """Check every structural invariant of the spec.

    Returns the full list of violated identities (with witnessing indices)
    rather than raising; callers decide what to do with an invalid spec.
    """
    bad = []
    qs = spec.q_size
    table = spec.q_table
    if len(table) != qs or any(len(row) != qs for row in table):
        return ValidationReport((f"q_table must be {qs}x{qs}",))
    if any(not (0 <= x < qs) for row in table for x in row):
        return ValidationReport(("q_table entries out of range",))
    for q in range(qs):
        if table[0][q] != q or table[q][0] != q:
            bad.append(f"index 0 is not the identity at q={q}")
    for q in range(qs):
        for r in range(qs):
            for s in range(qs):
                if table[table[q][r]][s] != table[q][table[r][s]]:
                    bad.append(f"associativity fails at ({q},{r},{s})")
    for q in range(qs):
        if all(table[q][r] != 0 for r in range(qs)):
            bad.append(f"no inverse for q={q}")
    if bad:
        return ValidationReport(tuple(bad))

    n = spec.n
    if len(spec.phi) != qs:
        bad.append("phi must assign one matrix per point-group index")
    else:
        for q, m in enumerate(spec.phi):
            if m.rows != n or m.cols != n:
                bad.append(f"phi({q}) is not {n}x{n}")
            elif abs(m.det()) != 1:
                bad.append(f"phi({q}) is not invertible over the integers")
        if not bad:
            if spec.phi[0] != IntMatrix.identity(n):
                bad.append("phi(0) must be the identity matrix")
            for q in range(qs):
                for r in range(qs):
                    if spec.phi[table[q][r]] != spec.phi[r] @ spec.phi[q]:
                        bad.append(f"phi is not an anti-homomorphism at ({q},{r})")
    if len(spec.coc) != qs or any(len(row) != qs for row in spec.coc):
        bad.append(f"coc must be a {qs}x{qs} array of vectors")
    else:
        for q in range(qs):
            for r in range(qs):
                if len(spec.coc[q][r]) != n:
                    bad.append(f"coc({q},{r}) has wrong length")
        if not bad:
            zero = (0,) * n
            for q in range(qs):
                if spec.coc[0][q] != zero or spec.coc[q][0] != zero:
                    bad.append(f"factor set is not normalized at q={q}")
            for q in range(qs):
                for r in range(qs):
                    for s in range(qs):
                        left = _vadd(spec.coc[table[q][r]][s], spec.phi[s].mat_vec(spec.coc[q][r]))
                        right = _vadd(spec.coc[q][table[r][s]], spec.coc[r][s])
                        if left != right:
                            bad.append(f"cocycle identity fails at ({q},{r},{s})")
    for name, g in spec.generator_names:
        if not (0 <= g.q < qs):
            bad.append(f"generator {name}: point index out of range")
        if len(g.a) != n:
            bad.append(f"generator {name}: vector has wrong length")
    return ValidationReport(tuple(bad))


def abelianization_relations(spec: ExtensionSpec) -> IntMatrix:
    """Relation matrix of G^ab over n + |Q| generator columns.

    Columns are the lattice basis t_1..t_n followed by one symbol r_q per
    point-group index.  The image of g = (q, a) is the vector (a | e_q).
    Rows: t_i = phi(q) t_i for every (q, i); r_q r_q' = r_{qq'} t^{coc(q,q')}
    for every pair, written as (-coc(q,q') | e_q + e_q' - e_{qq'}); and r_0
    trivial.
    """
    n, qs = spec.n, spec.q_size
    cols = n + qs
    rows = []
    for q in range(qs):
        m = spec.phi[q]
        for i in range(n):
            row = [0] * cols
            row[i] = 1
            for j in range(n):
                row[j] -= m[j, i]
            rows.append(row)
    for q in range(qs):
        for r in range(qs):
            row = [0] * cols
            for j in range(n):
                row[j] = -spec.coc[q][r][j]
            row[n + q] += 1
            row[n + r] += 1
            row[n + spec.q_table[q][r]] -= 1
            rows.append(row)
    last = [0] * cols
    last[n] = 1
    rows.append(last)
    return IntMatrix(rows, cols=cols)


class ExtensionGroup:
    """Element arithmetic and structure queries over a validated spec."""

    def __init__(self, spec: ExtensionSpec, name: str = "extension"):
        report = validate_extension(spec)
        if not report.ok:
            shown = "; ".join(report.failures[:5])
            raise GroupInputError(f"invalid extension spec: {shown}")
        self.spec = spec
        self.name = name
        self.generators = spec.generator_names
        self._ab = None
        self._torsion = None

    # -- element arithmetic -------------------------------------------------

    def identity(self) -> ExtElement:
        return ExtElement(0, (0,) * self.spec.n)

    def mul(self, g: ExtElement, h: ExtElement) -> ExtElement:
        s = self.spec
        q = s.q_table[g.q][h.q]
        return ExtElement(q, _vadd(_vadd(s.coc[g.q][h.q], s.phi[h.q].mat_vec(g.a)), h.a))

    def inv(self, g: ExtElement) -> ExtElement:
        s = self.spec
        qi = self.q_inverse(g.q)
        return ExtElement(qi, _vneg(_vadd(s.coc[g.q][qi], s.phi[qi].mat_vec(g.a))))

    def conj(self, g: ExtElement, x: ExtElement) -> ExtElement:
        return self.mul(self.mul(self.inv(x), g), x)

    def pow(self, g: ExtElement, k: int) -> ExtElement:
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

    def q_inverse(self, q: int) -> int:
        return self.spec.q_table[q].index(0)

    def q_order(self, q: int) -> int:
        o, cur = 1, q
        while cur != 0:
            cur = self.spec.q_table[cur][q]
            o += 1
        return o

    # -- capability contract used by the torsion engine ---------------------

    def in_translation(self, g: ExtElement) -> bool:
        return g.q == 0

    def translation_index(self) -> int:
        return self.spec.q_size

    def order_mod_translation(self, g: ExtElement) -> int:
        return self.q_order(g.q)

    def holonomy_exponent(self) -> int:
        return lcm(*(self.q_order(q) for q in range(self.spec.q_size)))

    def transversal(self):
        zero = (0,) * self.spec.n
        return [ExtElement(q, zero) for q in range(self.spec.q_size)]

    def labeled_transversal(self):
        """Coset representatives of the lattice, as (word, element) pairs.

        Built by breadth-first search over Q through the generator images,
        so the words are honest products of named generators.  Requires the
        generators to cover every coset.
        """
        reps = {0: ((), self.identity())}
        queue = [0]
        while queue:
            q = queue.pop(0)
            word, elem = reps[q]
            for name, gen in self.generators:
                nq = self.spec.q_table[q][gen.q]
                if nq not in reps:
                    reps[nq] = (word + (name,), self.mul(elem, gen))
                    queue.append(nq)
        if len(reps) != self.spec.q_size:
            raise GroupInputError("generators do not reach every coset of the lattice")
        # dict insertion order is the BFS discovery order
        return [(_format_run(word), elem) for word, elem in reps.values()]

    def labeled_transversal_mod(self, g: ExtElement):
        """Representatives of the cosets of A<g>, as (word, element) pairs."""
        cyc = [0]
        cur = g.q
        while cur != 0:
            cyc.append(cur)
            cur = self.spec.q_table[cur][g.q]
        covered = set()
        out = []
        for word, elem in self.labeled_transversal():
            if elem.q in covered:
                continue
            out.append((word, elem))
            covered.update(self.spec.q_table[c][elem.q] for c in cyc)
        return out

    def abelianization(self):
        if self._ab is None:
            self._ab = cokernel_structure(abelianization_relations(self.spec))
        return self._ab

    def ab_vector(self, g: ExtElement) -> tuple:
        e = [0] * self.spec.q_size
        e[g.q] = 1
        return g.a + tuple(e)

    # -- structure ----------------------------------------------------------

    def torsion_witness(self):
        """An element of finite order, or None if the group is torsion-free.

        For each q != 0 of order o in Q, (q, a)^o = (0, N_q a + c_q) with
        N_q and c_q computed symbolically; a torsion element exists exactly
        when N_q x = -c_q has an integer solution.
        """
        if self._torsion is None:
            self._torsion = self._find_torsion()
        return self._torsion

    def _find_torsion(self):
        s = self.spec
        for q in range(1, s.q_size):
            o = self.q_order(q)
            qacc = 0
            m = IntMatrix.zeros(s.n, s.n)
            c = (0,) * s.n
            for _ in range(o):
                m = s.phi[q] @ m + IntMatrix.identity(s.n)
                c = _vadd(s.coc[qacc][q], s.phi[q].mat_vec(c))
                qacc = s.q_table[qacc][q]
            assert qacc == 0
            x = solve_integer_linear(m, _vneg(c))
            if x is not None:
                return ExtElement(q, _vec(x))
        return None

    def is_torsion_free(self) -> bool:
        return self.torsion_witness() is None

    def center_rank(self) -> int:
        """Rank of the sublattice fixed by every phi(q)."""
        s = self.spec
        if s.q_size == 1:
            return s.n
        stacked = None
        for q in range(1, s.q_size):
            block = s.phi[q] - IntMatrix.identity(s.n)
            stacked = block if stacked is None else stacked.vstack(block)
        diag = smith_normal_form(stacked).diagonal()
        return s.n - sum(1 for d in diag if d != 0)

    # -- symbolic products (a treated as a formal vector) -------------------

    def symbolic_element(self, q: int):
        """(q, a) with formal a, as the triple (q, I, 0)."""
        return (q, IntMatrix.identity(self.spec.n), (0,) * self.spec.n)

    def symbolic_mul(self, s1, s2):
        q1, m1, c1 = s1
        q2, m2, c2 = s2
        s = self.spec
        return (
            s.q_table[q1][q2],
            s.phi[q2] @ m1 + m2,
            _vadd(_vadd(s.coc[q1][q2], s.phi[q2].mat_vec(c1)), c2),
        )

    def symbolic_mul_concrete_left(self, x: ExtElement, sym):
        q2, m, c = sym
        s = self.spec
        return (
            s.q_table[x.q][q2],
            m,
            _vadd(_vadd(s.coc[x.q][q2], s.phi[q2].mat_vec(x.a)), c),
        )

    def symbolic_mul_concrete_right(self, sym, x: ExtElement):
        q1, m, c = sym
        s = self.spec
        return (
            s.q_table[q1][x.q],
            s.phi[x.q] @ m,
            _vadd(_vadd(s.coc[q1][x.q], s.phi[x.q].mat_vec(c)), x.a),
        )

    def symbolic_conj(self, sym, x: ExtElement):
        return self.symbolic_mul_concrete_right(self.symbolic_mul_concrete_left(self.inv(x), sym), x)

    def symbolic_pow(self, q: int, k: int):
        """(q, a)^k as (point part, N, c) with a formal."""
        out = (0, IntMatrix.zeros(self.spec.n, self.spec.n), (0,) * self.spec.n)
        g = self.symbolic_element(q)
        for _ in range(k):
            out = self.symbolic_mul(out, g)
        return out

    def verify_positive_identity_all(self, k: int, conjugators) -> bool:
        """True iff prod_j (g^k)^{x_j} = 1 for EVERY group element g.

        The base element is kept formal: for each point part q the product
        is computed with a as a symbolic vector, and the identity holds for
        all of G exactly when every resulting point part, matrix part, and
        constant part vanishes.
        """
        n = self.spec.n
        zero_m = IntMatrix.zeros(n, n)
        zero_v = (0,) * n
        for q in range(self.spec.q_size):
            base = self.symbolic_pow(q, k)
            total = None
            for x in conjugators:
                term = self.symbolic_conj(base, x)
                total = term if total is None else self.symbolic_mul(total, term)
            tq, tm, tc = total
            if tq != 0 or tm != zero_m or tc != zero_v:
                return False
        return True


def _format_run(word) -> str:
    runs = []
    for name in word:
        if runs and runs[-1][0] == name:
            runs[-1][1] += 1
        else:
            runs.append([name, 1])
    return run_word([(name, count) for name, count in runs])


def direct_product(spec1: ExtensionSpec, spec2: ExtensionSpec) -> ExtensionSpec:
    """Spec of G1 x G2: Q = Q1 x Q2, block phi, concatenated factor set."""
    q1, q2 = spec1.q_size, spec2.q_size
    n1, n2 = spec1.n, spec2.n
    qs = q1 * q2

    def pack(i, j):
        return i * q2 + j

    table = [[0] * qs for _ in range(qs)]
    for i in range(q1):
        for j in range(q2):
            for k in range(q1):
                for l in range(q2):
                    table[pack(i, j)][pack(k, l)] = pack(spec1.q_table[i][k], spec2.q_table[j][l])
    phi = []
    for i in range(q1):
        for j in range(q2):
            m1, m2 = spec1.phi[i], spec2.phi[j]
            block = [[0] * (n1 + n2) for _ in range(n1 + n2)]
            for r in range(n1):
                for c in range(n1):
                    block[r][c] = m1[r, c]
            for r in range(n2):
                for c in range(n2):
                    block[n1 + r][n1 + c] = m2[r, c]
            phi.append(block)
    coc = [[None] * qs for _ in range(qs)]
    for i in range(q1):
        for j in range(q2):
            for k in range(q1):
                for l in range(q2):
                    coc[pack(i, j)][pack(k, l)] = tuple(spec1.coc[i][k]) + tuple(spec2.coc[j][l])
    taken = set()
    gens = []
    for name, g in spec1.generator_names:
        gens.append((name, (pack(g.q, 0), tuple(g.a) + (0,) * n2)))
        taken.add(name)
    for name, g in spec2.generator_names:
        new = name
        while new in taken:
            new += "2"
        taken.add(new)
        gens.append((new, (pack(0, g.q), (0,) * n1 + tuple(g.a))))
    return ExtensionSpec.build(table, phi, coc, gens)


def spec_to_dict(spec: ExtensionSpec) -> dict:
    """JSON-ready form of a spec (the CLI's group-spec schema)."""
    return {
        "q_size": spec.q_size,
        "q_table": [list(row) for row in spec.q_table],
        "n": spec.n,
        "phi": [m.to_lists() for m in spec.phi],
        "coc": [[list(v) for v in row] for row in spec.coc],
        "generators": {name: {"q": g.q, "a": list(g.a)} for name, g in spec.generator_names},
    }


def spec_from_dict(data: dict) -> ExtensionSpec:
    """Parse the JSON group-spec schema; raises GroupInputError on bad shape.

    Generator order follows the order of keys in the ``generators`` object
    (JSON objects are read in document order), which fixes transversal
    words and all derived certificates.
    """
    try:
        q_table = data["q_table"]
        n = int(data["n"])
        phi = data["phi"]
        coc = data["coc"]
        generators = [(name, (entry["q"], entry["a"])) for name, entry in data["generators"].items()]
    except (KeyError, TypeError) as exc:
        raise GroupInputError(f"malformed group spec: {exc}") from None
    spec = ExtensionSpec.build(q_table, phi, coc, generators)
    if "q_size" in data and int(data["q_size"]) != spec.q_size:
        raise GroupInputError("q_size disagrees with the q_table")
    if spec.n != n:
        raise GroupInputError("n disagrees with the phi matrices")
    return spec
