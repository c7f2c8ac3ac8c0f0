"""Picard-lattice bookkeeping: weight matrix, divisor and curve classes."""

from dataclasses import dataclass

from .fan import walls as fan_walls


class BasisMismatch(ValueError):
    """Classes expressed in different Picard bases were combined."""


class InconsistentRelation(ArithmeticError):
    pass


class NotAmplePolarization(ValueError):
    pass


@dataclass(frozen=True)
class WeightMatrix:
    """The r x l matrix A whose columns are the classes of the ray divisors.

    The Picard basis is {O(D_c) : c in ``complement``}, the rays outside
    the maximal cone ``basis_cone``.
    """

    entries: tuple
    basis_cone: int
    complement: tuple

    @property
    def rank(self):
        return len(self.entries)

    @property
    def nrays(self):
        return len(self.entries[0])

    def column(self, rho):
        return tuple(row[rho] for row in self.entries)

    def ray_degrees(self, beta):
        """d_rho = sum_i a_{i rho} f_i for every ray."""
        _check_tag(self.basis_cone, beta.basis_cone)
        return tuple(sum(a * f for a, f in zip(self.column(rho), beta.f)) for rho in range(self.nrays))

    def from_ray_coords(self, alpha):
        """Picard class of sum_rho alpha_rho D_rho."""
        if len(alpha) != self.nrays:
            raise ValueError(f"expected {self.nrays} ray coefficients, got {len(alpha)}")
        coords = tuple(sum(row[i] * alpha[i] for i in range(self.nrays)) for row in self.entries)
        return DivisorClass(coords, self.basis_cone)


@dataclass(frozen=True)
class DivisorClass:
    coords: tuple
    basis_cone: int = 0

    def __add__(self, other):
        _check_tag(self.basis_cone, other.basis_cone)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.basis_cone)

    def __rmul__(self, k):
        return DivisorClass(tuple(k * a for a in self.coords), self.basis_cone)

    def to_json(self):
        return {"basis_cone": self.basis_cone + 1, "coords": list(self.coords)}

    @classmethod
    def from_json(cls, data, basis_cone=None):
        tag = int(data["basis_cone"]) - 1
        if basis_cone is not None:
            _check_tag(basis_cone, tag)
        return cls(tuple(int(x) for x in data["coords"]), tag)


@dataclass(frozen=True, order=True)
class CurveClass:
    """A curve class recorded by f_i = int_beta c1(L_i)."""

    f: tuple
    basis_cone: int = 0

    def __add__(self, other):
        _check_tag(self.basis_cone, other.basis_cone)
        return CurveClass(tuple(a + b for a, b in zip(self.f, other.f)), self.basis_cone)

    def __rmul__(self, k):
        return CurveClass(tuple(k * a for a in self.f), self.basis_cone)

    def is_zero(self):
        return not any(self.f)

    def to_json(self):
        return {"basis_cone": self.basis_cone + 1, "f": list(self.f)}

    @classmethod
    def from_json(cls, data, basis_cone=None):
        tag = int(data["basis_cone"]) - 1
        if basis_cone is not None:
            _check_tag(basis_cone, tag)
        return cls(tuple(int(x) for x in data["f"]), tag)


def _check_tag(a, b):
    if a != b:
        raise BasisMismatch(f"Picard basis of cone {a + 1} mixed with basis of cone {b + 1}")


def weight_matrix(fan, basis_cone=0):
    """Weight matrix in the basis of ray divisors outside ``basis_cone``.

    Columns of rays outside the cone form the identity; a ray b inside the
    cone satisfies D_b = -sum_c (coordinate of c along b) D_c, which is the
    relation sum_rho <m, rho> D_rho = 0 solved for the cone's rays.
    """
    cone = fan.max_cones[basis_cone]
    complement = tuple(i for i in range(fan.nrays) if i not in cone)
    rows = []
    for c in complement:
        coords = dict(zip(cone, fan.cone_coordinates(basis_cone, fan.rays[c].coords)))
        row = []
        for rho in range(fan.nrays):
            if rho in cone:
                row.append(-int(coords[rho]))
            else:
                row.append(int(rho == c))
        rows.append(tuple(row))
    return WeightMatrix(tuple(rows), basis_cone, complement)


def ray_divisor_class(A, rho):
    return DivisorClass(A.column(rho), A.basis_cone)


def anticanonical(A):
    """c1 = sum of all ray divisor classes (Euler sequence)."""
    return DivisorClass(tuple(sum(row) for row in A.entries), A.basis_cone)


def zero_curve(A):
    return CurveClass((0,) * A.rank, A.basis_cone)


def wall_curve_class(fan, A, wall):
    d = wall.degrees(fan.nrays)
    beta = CurveClass(tuple(d[c] for c in A.complement), A.basis_cone)
    if A.ray_degrees(beta) != d:
        raise InconsistentRelation(f"wall {wall.face} relation is not in the image of A")
    return beta


def wall_curves(fan, A):
    return [wall_curve_class(fan, A, w) for w in fan_walls(fan)]


def degree(beta, D):
    _check_tag(beta.basis_cone, D.basis_cone)
    return sum(f * c for f, c in zip(beta.f, D.coords))


def is_nef(fan, A, D):
    return all(degree(b, D) >= 0 for b in wall_curves(fan, A))


def is_ample(fan, A, D):
    return all(degree(b, D) > 0 for b in wall_curves(fan, A))


def is_fano(fan, A):
    return is_ample(fan, A, anticanonical(A))


def default_polarization(fan, A):
    """The first ample class ordered by (coordinate sum, lex); O(1) on P^n."""
    curves = wall_curves(fan, A)
    total = A.rank
    while True:
        # ample classes have positive coordinates in a sigma-basis
        for coords in sorted(_compositions(total, A.rank)):
            D = DivisorClass(coords, A.basis_cone)
            if all(degree(b, D) > 0 for b in curves):
                return D
        total += 1


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_effective(fan, A, polarization, bound):
    """Nonzero effective classes of polarization degree at most ``bound``.

    Uses that the Mori cone of a smooth projective toric variety is spanned
    by the torus-invariant curves of the walls (standard toric geometry).
    """
    if not is_ample(fan, A, polarization):
        raise NotAmplePolarization(f"polarization {polarization.coords} is not ample")
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    gens = sorted(set(wall_curves(fan, A)))
    found = set()
    frontier = [zero_curve(A)]
    while frontier:
        nxt = []
        for beta in frontier:
            for g in gens:
                b = beta + g
                if b not in found and degree(b, polarization) <= bound:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(found, key=lambda b: (degree(b, polarization), b.f))


def change_of_basis(A, B):
    """Unimodular U with B = U A (columns of B at A's complement rays)."""
    return tuple(tuple(row[c] for c in A.complement) for row in B.entries)

