"""Rational cohomology of a smooth complete toric variety.

H*(X; Q) is presented as Q[x_rho] modulo the Stanley-Reisner monomials of
the primitive collections and the linear relations sum_rho <m_j, rho> x_rho.
Each graded piece is computed by exact Gaussian elimination; no Groebner
machinery is needed because the ideal is homogeneous and degrees stop at n.
Degrees are divisor degrees (H^{2k} has degree k).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement

from . import linalg
from .fan import primitive_collections
from .picard import DivisorClass, weight_matrix


class InconsistentNormalization(ArithmeticError):
    pass


def grevlex_key(e):
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(e),) + tuple(-x for x in reversed(e))


def monomials(nvars, k):
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grevlex_key, reverse=True)
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class CohClass:
    """Per-degree coefficient vectors over the ring's graded basis."""

    parts: tuple

    @property
    def top(self):
        return len(self.parts) - 1

    def is_zero(self):
        return not any(any(p) for p in self.parts)

    def degree_part(self, k):
        return self.parts[k]

    def homogeneous_degrees(self):
        return [k for k, p in enumerate(self.parts) if any(p)]

    def __add__(self, other):
        return CohClass(tuple(tuple(a + b for a, b in zip(p, q)) for p, q in zip(self.parts, other.parts)))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        c = Fraction(c)
        return CohClass(tuple(tuple(c * a for a in p) for p in self.parts))

    def to_json(self):
        return {str(k): [_frac_str(x) for x in p] for k, p in enumerate(self.parts) if any(p)}


def _frac_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class CohomologyRing:
    """Graded presentation with a deterministic standard-monomial basis."""

    def __init__(self, fan, A=None):
        self.fan = fan
        self.A = A if A is not None else weight_matrix(fan)
        self.n = fan.dim
        self.nvars = fan.nrays
        self.sr_monomials = [
            tuple(int(i in S) for i in range(self.nvars)) for S in primitive_collections(fan)
        ]
        self.linear_relations = [
            tuple(fan.rays[rho].coords[j] for rho in range(self.nvars)) for j in range(self.n)
        ]
        self.basis = []
        self._reduce = {}
        for k in range(self.n + 1):
            basis, red = self._graded_piece(k)
            self.basis.append(basis)
            self._reduce.update(red)
        self._index = [{m: i for i, m in enumerate(b)} for b in self.basis]
        self._table = {}
        self.point = self._point_class()

    @property
    def betti(self):
        return tuple(len(b) for b in self.basis)

    def _ideal_rows(self, k, mons):
        col = {m: i for i, m in enumerate(mons)}
        rows = []
        for s in self.sr_monomials:
            ds = sum(s)
            if ds <= k:
                for m in monomials(self.nvars, k - ds):
                    v = [0] * len(mons)
                    v[col[_add(s, m)]] = 1
                    rows.append(v)
        if k >= 1:
            for rel in self.linear_relations:
                for m in monomials(self.nvars, k - 1):
                    v = [0] * len(mons)
                    for rho, c in enumerate(rel):
                        if c:
                            e = list(m)
                            e[rho] += 1
                            v[col[tuple(e)]] += c
                    rows.append(v)
        return rows

    def _graded_piece(self, k):
        mons = monomials(self.nvars, k)
        rows = self._ideal_rows(k, mons)
        red, pivots = linalg.rref(rows, len(mons)) if rows else ([], [])
        pivset = set(pivots)
        basis = [m for i, m in enumerate(mons) if i not in pivset]
        bidx = {m: i for i, m in enumerate(basis)}
        reduction = {}
        for m in basis:
            v = [Fraction(0)] * len(basis)
            v[bidx[m]] = Fraction(1)
            reduction[m] = tuple(v)
        for row, p in zip(red, pivots):
            v = [Fraction(0)] * len(basis)
            for i, c in enumerate(row):
                if c and i != p:
                    v[bidx[mons[i]]] = -c
            reduction[mons[p]] = tuple(v)
        return basis, reduction

    # -- classes -------------------------------------------------------

    def zero(self):
        return CohClass(tuple((Fraction(0),) * len(b) for b in self.basis))

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        z = [list(p) for p in self.zero().parts]
        z[0][0] = Fraction(c)
        return CohClass(tuple(tuple(p) for p in z))

    def basis_class(self, k, i):
        z = [list(p) for p in self.zero().parts]
        z[k][i] = Fraction(1)
        return CohClass(tuple(tuple(p) for p in z))

    def reduce_monomial(self, e):
        """Normal form of the monomial with exponent vector ``e``."""
        e = tuple(e)
        k = sum(e)
        if k > self.n:
            return self.zero()
        z = [list(p) for p in self.zero().parts]
        z[k] = list(self._reduce[e])
        return CohClass(tuple(tuple(p) for p in z))

    def linear_form(self, coeffs):
        """Class of sum_rho coeffs[rho] x_rho."""
        v = [0] * len(self.basis[1])
        for rho, c in enumerate(coeffs):
            if c:
                e = tuple(int(i == rho) for i in range(self.nvars))
                for i, x in enumerate(self._reduce[e]):
                    v[i] += c * x
        z = [list(p) for p in self.zero().parts]
        z[1] = [Fraction(x) for x in v]
        return CohClass(tuple(tuple(p) for p in z))

    def product_table(self, p, i, q, j):
        """Degree p+q coefficient vector of basis_p[i] * basis_q[j]."""
        key = (p, i, q, j) if (p, i) <= (q, j) else (q, j, p, i)
        t = self._table.get(key)
        if t is None:
            if p + q > self.n:
                t = ()
            else:
                t = tuple(self._reduce[_add(self.basis[p][i], self.basis[q][j])])
            self._table[key] = t
        return t

    def mul(self, a, b):
        out = [[Fraction(0)] * len(bb) for bb in self.basis]
        for p, ap in enumerate(a.parts):
            for i, x in enumerate(ap):
                if not x:
                    continue
                for q in range(self.n + 1 - p):
                    for j, y in enumerate(b.parts[q]):
                        if not y:
                            continue
                        xy = x * y
                        for k, c in enumerate(self.product_table(p, i, q, j)):
                            if c:
                                out[p + q][k] += xy * c
        return CohClass(tuple(tuple(r) for r in out))

    def power(self, a, m):
        out = self.one()
        for _ in range(m):
            out = self.mul(out, a)
        return out

    def _point_class(self):
        values = set()
        for c in self.fan.max_cones:
            e = tuple(int(i in c) for i in range(self.nvars))
            values.add(self._reduce[e][0])
        if len(values) != 1 or 0 in values:
            raise InconsistentNormalization(f"maximal cones give point classes {sorted(values)}")
        return values.pop()

    def integrate(self, a):
        return a.parts[self.n][0] / self.point

    def pairing_matrix(self, k):
        return [
            [self.integrate(self.mul(self.basis_class(k, i), self.basis_class(self.n - k, j)))
             for j in range(len(self.basis[self.n - k]))]
            for i in range(len(self.basis[k]))
        ]

    def in_principal_ideal(self, c, g):
        """Whether ``c`` lies in the ideal g * H*(X)."""
        gens = [self.mul(g, self.basis_class(k, i)) for k in range(self.n + 1) for i in range(len(self.basis[k]))]
        vecs = [[x for p in h.parts for x in p] for h in gens]
        return linalg.in_span(vecs, [x for p in c.parts for x in p])

    @cached_property
    def picard_divisor_classes(self):
        """Classes of the Picard basis divisors L_i = D_{c_i}."""
        return [self.ray_class(c) for c in self.A.complement]

    def ray_class(self, rho):
        return self.linear_form([int(i == rho) for i in range(self.nvars)])

    def divisor_coordinates(self, a):
        """Picard coordinates of a class in H^2."""
        cols = [list(h.parts[1]) for h in self.picard_divisor_classes]
        return linalg.solve(linalg.transpose(cols), list(a.parts[1]))

    def basis_labels(self):
        """Human-readable basis monomials, e.g. ``x3^2``."""
        out = []
        for b in self.basis:
            labels = []
            for e in b:
                parts = [f"x{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p]
                labels.append("*".join(parts) if parts else "1")
            out.append(labels)
        return out


def build_ring(fan, A=None):
    return CohomologyRing(fan, A)


def divisor_to_coh(ring, D):
    """Cohomology class of a ray divisor (by index) or of a Picard class."""
    if isinstance(D, DivisorClass):
        coeffs = [0] * ring.nvars
        for c, x in zip(ring.A.complement, D.coords):
            coeffs[c] += x
        return ring.linear_form(coeffs)
    return ring.ray_class(D)


def mul(ring, a, b):
    return ring.mul(a, b)


def integrate(ring, a):
    return ring.integrate(a)
