"""Truncated formal algebra for I-function coefficients.

A :class:`ZLaurentSeries` is a finite Laurent polynomial in ``z`` whose
coefficients are cohomology classes with polynomial coefficients in the
parameters t_0..t_r. Storage is a flat sparse map

    (z_exponent, class_degree, basis_index, t_exponent) -> Fraction

with zeros pruned. Two truncations are threaded through every operation:
``t_trunc`` drops t-monomials of total degree above it, and ``z_floor``
drops z-exponents below it. Mixing truncations raises
:class:`IncompatibleTruncation`.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .cohomology import CohClass, _frac_str


class IncompatibleTruncation(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


def _tadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


class TPoly:
    """Polynomial in t_0..t_r with rational coefficients, truncated in total degree.

    ``trunc=None`` keeps every term.
    """

    __slots__ = ("terms", "nvars", "trunc")

    def __init__(self, terms, nvars, trunc=None):
        self.nvars = nvars
        self.trunc = trunc
        self.terms = {
            e: Fraction(c) for e, c in terms.items() if c and (trunc is None or sum(e) <= trunc)
        }

    @classmethod
    def constant(cls, c, nvars, trunc=None):
        return cls({(0,) * nvars: c}, nvars, trunc)

    @classmethod
    def var(cls, i, nvars, trunc=None):
        return cls({tuple(int(j == i) for j in range(nvars)): 1}, nvars, trunc)

    def _check(self, other):
        if self.nvars != other.nvars or self.trunc != other.trunc:
            raise IncompatibleTruncation(f"t-polynomials over ({self.nvars}, {self.trunc}) and ({other.nvars}, {other.trunc})")

    def __add__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.constant(other, self.nvars, self.trunc)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TPoly(out, self.nvars, self.trunc)

    __radd__ = __add__

    def __neg__(self):
        return TPoly({e: -c for e, c in self.terms.items()}, self.nvars, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TPoly):
            return TPoly({e: c * other for e, c in self.terms.items()}, self.nvars, self.trunc)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _tadd(e1, e2)
                if self.trunc is None or sum(e) <= self.trunc:
                    out[e] = out.get(e, 0) + c1 * c2
        return TPoly(out, self.nvars, self.trunc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.constant(other, self.nvars, self.trunc)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def retruncate(self, trunc):
        return TPoly(self.terms, self.nvars, trunc)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mon = "*".join(f"t{i}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class ZLaurentSeries:
    ring: object
    nt: int
    t_trunc: int
    z_floor: int
    terms: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pruned = {
            k: v for k, v in self.terms.items()
            if v and k[0] >= self.z_floor and sum(k[3]) <= self.t_trunc and k[1] <= self.ring.n
        }
        object.__setattr__(self, "terms", pruned)

    def __eq__(self, other):
        return (
            isinstance(other, ZLaurentSeries)
            and self.ring is other.ring
            and (self.nt, self.t_trunc, self.z_floor) == (other.nt, other.t_trunc, other.z_floor)
            and self.terms == other.terms
        )

    def like(self, terms):
        return ZLaurentSeries(self.ring, self.nt, self.t_trunc, self.z_floor, terms)

    def is_zero(self):
        return not self.terms

    def z_exponents(self):
        return sorted({k[0] for k in self.terms})

    def coefficient(self, z):
        """Coefficient of z^z as a map (degree, basis index) -> TPoly."""
        out = {}
        for (ze, k, i, te), c in self.terms.items():
            if ze == z:
                out.setdefault((k, i), {})[te] = c
        return {key: TPoly(v, self.nt, self.t_trunc) for key, v in out.items()}

    def class_at(self, z, texp=None):
        """Cohomology class multiplying z^z t^texp (texp defaults to t^0)."""
        texp = texp if texp is not None else (0,) * self.nt
        parts = [[Fraction(0)] * len(b) for b in self.ring.basis]
        for (ze, k, i, te), c in self.terms.items():
            if ze == z and te == texp:
                parts[k][i] = c
        return CohClass(tuple(tuple(p) for p in parts))

    def at_t_zero(self):
        zero = (0,) * self.nt
        return self.like({k: v for k, v in self.terms.items() if k[3] == zero})

    def __add__(self, other):
        return zl_add(self, other)

    def __sub__(self, other):
        return zl_add(self, -other)

    def __neg__(self):
        return self.like({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ZLaurentSeries):
            return zl_mul(self, other)
        return self.like({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def with_floor(self, z_floor):
        return ZLaurentSeries(self.ring, self.nt, self.t_trunc, z_floor, self.terms)

    def to_json(self):
        """Terms grouped by (z, t_exp), z descending then t_exp lex."""
        groups = {}
        for (ze, k, i, te), c in self.terms.items():
            groups.setdefault((ze, te), {})[(k, i)] = c
        out = []
        for ze, te in sorted(groups, key=lambda g: (-g[0], g[1])):
            cls = {}
            for (k, i), c in sorted(groups[(ze, te)].items()):
                vec = cls.setdefault(str(k), ["0"] * len(self.ring.basis[k]))
                vec[i] = _frac_str(c)
            out.append({"z": ze, "t_exp": list(te), "class": cls})
        return out


def _check(a, b):
    if a.ring is not b.ring:
        raise IncompatibleTruncation("series over different cohomology rings")
    if (a.nt, a.t_trunc, a.z_floor) != (b.nt, b.t_trunc, b.z_floor):
        raise IncompatibleTruncation(
            f"(nt, t_trunc, z_floor) = {(a.nt, a.t_trunc, a.z_floor)} vs {(b.nt, b.t_trunc, b.z_floor)}"
        )


def zl_zero(ring, nt, t_trunc, z_floor):
    return ZLaurentSeries(ring, nt, t_trunc, z_floor, {})


def zl_monomial(ring, nt, t_trunc, z_floor, cls=None, z=0, texp=None, coeff=1):
    """coeff * cls * z^z * t^texp (``cls`` defaults to the unit)."""
    texp = tuple(texp) if texp is not None else (0,) * nt
    cls = cls if cls is not None else ring.one()
    terms = {}
    for k, part in enumerate(cls.parts):
        for i, c in enumerate(part):
            if c:
                terms[(z, k, i, texp)] = Fraction(coeff) * c
    return ZLaurentSeries(ring, nt, t_trunc, z_floor, terms)


def zl_one(ring, nt, t_trunc, z_floor):
    return zl_monomial(ring, nt, t_trunc, z_floor)


def zl_add(a, b):
    _check(a, b)
    out = dict(a.terms)
    for k, v in b.terms.items():
        out[k] = out.get(k, 0) + v
    return a.like(out)


def _raw_mul(a, b, z_floor):
    ring = a.ring
    out = {}
    for (z1, k1, i1, t1), c1 in a.terms.items():
        for (z2, k2, i2, t2), c2 in b.terms.items():
            z = z1 + z2
            if z_floor is not None and z < z_floor:
                continue
            if k1 + k2 > ring.n:
                continue
            t = _tadd(t1, t2)
            if sum(t) > a.t_trunc:
                continue
            c = c1 * c2
            for k, s in enumerate(ring.product_table(k1, i1, k2, i2)):
                if s:
                    key = (z, k1 + k2, k, t)
                    out[key] = out.get(key, 0) + c * s
    return out


def zl_mul(a, b):
    """Exact product, truncated below z_floor and above t_trunc."""
    _check(a, b)
    return a.like(_raw_mul(a, b, a.z_floor))


def _exact(a):
    # same data, no z truncation: used for intermediate powers whose
    # z-exponents may still rise under later factors
    return ZLaurentSeries(a.ring, a.nt, a.t_trunc, -(10**9), a.terms)


def zl_invert_unit(a):
    """Inverse of c * z^m * (1 + nu) with nu nilpotent, by finite geometric series."""
    zero_t = (0,) * a.nt
    lead = {k: v for k, v in a.terms.items() if k[1] == 0 and k[3] == zero_t}
    if len(lead) != 1:
        raise NotInvertible(
            "leading part is not a single nonzero scalar multiple of a power of z"
            f" (scalar z-terms at {sorted(k[0] for k in lead)})"
        )
    ((m, _, _, _), c), = lead.items()
    ea = _exact(a)
    shift = zl_monomial(a.ring, a.nt, a.t_trunc, ea.z_floor, z=-m, coeff=1 / c)
    nu = zl_mul(ea, shift) - zl_one(a.ring, a.nt, a.t_trunc, ea.z_floor)
    total = zl_one(a.ring, a.nt, a.t_trunc, ea.z_floor)
    power = total
    neg_nu = -nu
    # nu^j vanishes once j exceeds n + t_trunc
    for _ in range(a.ring.n + a.t_trunc + 1):
        power = zl_mul(power, neg_nu)
        if power.is_zero():
            break
        total = total + power
    else:
        if not power.is_zero():
            raise NotInvertible("correction term is not nilpotent")
    return ZLaurentSeries(a.ring, a.nt, a.t_trunc, a.z_floor, zl_mul(total, shift).terms)


def exp_factor(arg, z_power=-1):
    """exp(arg * z^z_power) for a z-free nilpotent ``arg``.

    ``arg`` must have every term of positive class degree or positive
    t-degree; the series stops by nilpotency and t-truncation. With
    ``z_power=-1`` this is e^{t/z}; with ``z_power=0`` it is e^{int_beta t}.
    """
    zero_t = (0,) * arg.nt
    for (z, k, _, t) in arg.terms:
        if z != 0:
            raise ValueError("exponent argument must be z-free")
        if k == 0 and t == zero_t:
            raise ValueError("exponent argument must be nilpotent")
    ring = arg.ring
    ea = _exact(arg)
    shifted = ea.like({(z_power, k, i, t): v for (_, k, i, t), v in ea.terms.items()})
    total = zl_one(ring, arg.nt, arg.t_trunc, ea.z_floor)
    power = total
    for m in range(1, ring.n + arg.t_trunc + 2):
        power = zl_mul(power, shifted)
        if power.is_zero():
            break
        total = total + power * Fraction(1, factorial(m))
    return ZLaurentSeries(ring, arg.nt, arg.t_trunc, arg.z_floor, total.terms)


def parameter_series(ring, nt, t_trunc, z_floor, classes):
    """sum_a t_a * classes[a] as a z-free series."""
    out = zl_zero(ring, nt, t_trunc, z_floor)
    for a, cls in enumerate(classes):
        texp = tuple(int(j == a) for j in range(nt))
        out = out + zl_monomial(ring, nt, t_trunc, z_floor, cls=cls, texp=texp)
    return out
