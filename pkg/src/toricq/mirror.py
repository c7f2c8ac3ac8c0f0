"""Mirror map extraction, inversion, and the change of variables J(tau) = I(t(tau)).

Truncating the parameters t at a fixed total degree is not stable under a
substitution t -> t + (Novikov correction): a correction with a constant
term lowers t-degree. The mirror map is therefore computed exactly, in the
ring spanned by

    Q^beta * exp(int_gamma t) * t^a * z^e * (basis class),

which is closed under products and under t -> t + delta for Novikov-positive
delta. Only the Novikov degree is truncated (by the polarization bound); the
t-truncated series is produced at the end by expanding exp(int_gamma t).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .cohomology import _frac_str
from .givental import IFunctionSeries, exact_beta_coefficient, exp_factor, parameter_class
from .picard import CurveClass
from .series import TPoly


class MirrorMapNotSmall(ValueError):
    """The z^-1 coefficient has components of divisor degree >= 2."""


class MirrorMapNotInvertible(ValueError):
    pass


@dataclass(frozen=True)
class NovikovContext:
    ring: object
    rank: int
    polarization: tuple
    bound: int

    @property
    def nt(self):
        return self.rank + 1

    def pol_degree(self, beta):
        return sum(f * p for f, p in zip(beta, self.polarization))


class NovikovSeries:
    """Sparse map (beta, gamma, z, k, i, t_exp) -> Fraction.

    A key stands for Q^beta exp(int_gamma t) t^t_exp z^z times basis class
    i of degree k. Terms with Novikov degree above the bound are dropped.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {
            key: Fraction(c) for key, c in (terms or {}).items()
            if c and ctx.pol_degree(key[0]) <= ctx.bound and key[3] <= ctx.ring.n
        }

    # constructors
    @classmethod
    def monomial(cls, ctx, beta=None, gamma=None, z=0, k=0, i=0, texp=None, coeff=1):
        zero = (0,) * ctx.rank
        key = (tuple(beta or zero), tuple(gamma or zero), z, k, i, tuple(texp or (0,) * ctx.nt))
        return cls(ctx, {key: coeff})

    @classmethod
    def variable(cls, ctx, a):
        return cls.monomial(ctx, texp=tuple(int(j == a) for j in range(ctx.nt)))

    @classmethod
    def from_class(cls, ctx, cohclass, coeff=None, z=0):
        """``coeff`` (a z-free scalar series, default 1) times a cohomology class, times z^z."""
        coeff = coeff if coeff is not None else cls.monomial(ctx)
        out = {}
        for k, part in enumerate(cohclass.parts):
            for i, x in enumerate(part):
                if not x:
                    continue
                for (b, g, ze, _, _, te), c in coeff.terms.items():
                    key = (b, g, ze + z, k, i, te)
                    out[key] = out.get(key, 0) + c * x
        return cls(ctx, out)

    # arithmetic
    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return NovikovSeries(self.ctx, out)

    def __neg__(self):
        return NovikovSeries(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NovikovSeries):
            return NovikovSeries(self.ctx, {k: c * other for k, c in self.terms.items()})
        ring = self.ctx.ring
        out = {}
        for (b1, g1, z1, k1, i1, t1), c1 in self.terms.items():
            for (b2, g2, z2, k2, i2, t2), c2 in other.terms.items():
                if k1 + k2 > ring.n:
                    continue
                b = tuple(x + y for x, y in zip(b1, b2))
                if self.ctx.pol_degree(b) > self.ctx.bound:
                    continue
                g = tuple(x + y for x, y in zip(g1, g2))
                t = tuple(x + y for x, y in zip(t1, t2))
                c = c1 * c2
                for i, s in enumerate(ring.product_table(k1, i1, k2, i2)):
                    if s:
                        key = (b, g, z1 + z2, k1 + k2, i, t)
                        out[key] = out.get(key, 0) + c * s
        return NovikovSeries(self.ctx, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, NovikovSeries) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def novikov_positive(self):
        return all(any(key[0]) for key in self.terms)

    def restrict(self, predicate):
        return NovikovSeries(self.ctx, {k: c for k, c in self.terms.items() if predicate(k)})

    def exp(self):
        """exp of a Novikov-positive series; stops at the Novikov bound."""
        if not self.novikov_positive():
            raise ValueError("exp needs a Novikov-positive argument")
        total = NovikovSeries.monomial(self.ctx)
        power = total
        m = 0
        while True:
            m += 1
            power = power * self
            if power.is_zero():
                return total
            total = total + power * Fraction(1, factorial(m))

    def substitute(self, delta):
        """Replace t_a by t_a + delta[a]; every delta[a] must be Novikov-positive, z-free scalars."""
        ctx = self.ctx
        for d in delta:
            if not d.novikov_positive():
                raise MirrorMapNotInvertible("substitution must be Novikov-positive")
        shifted = [NovikovSeries.variable(ctx, a) + delta[a] for a in range(ctx.nt)]
        exp_cache, pow_cache = {}, {}

        def exp_of(gamma):
            if gamma not in exp_cache:
                arg = NovikovSeries(ctx)
                for i, gi in enumerate(gamma):
                    if gi:
                        arg = arg + delta[i + 1] * gi
                exp_cache[gamma] = arg.exp()
            return exp_cache[gamma]

        def power(a, e):
            if (a, e) not in pow_cache:
                p = NovikovSeries.monomial(ctx)
                for _ in range(e):
                    p = p * shifted[a]
                pow_cache[(a, e)] = p
            return pow_cache[(a, e)]

        out = NovikovSeries(ctx)
        for (b, g, z, k, i, te), c in self.terms.items():
            term = NovikovSeries.monomial(ctx, b, g, z, k, i, coeff=c) * exp_of(g)
            for a, e in enumerate(te):
                if e:
                    term = term * power(a, e)
            out = out + term
        return out

    def expand(self, t_trunc):
        """Expand exp(int_gamma t) and group by beta: beta -> {(z, k, i, t_exp): Fraction}."""
        nt = self.ctx.nt
        exp_cache = {}

        def exp_poly(gamma):
            if gamma not in exp_cache:
                lin = TPoly({tuple(int(j == a + 1) for j in range(nt)): g for a, g in enumerate(gamma)}, nt, t_trunc)
                total = TPoly.constant(1, nt, t_trunc)
                power = total
                for m in range(1, t_trunc + 1):
                    power = power * lin
                    total = total + power * Fraction(1, factorial(m))
                exp_cache[gamma] = total
            return exp_cache[gamma]

        out = {}
        for (b, g, z, k, i, te), c in self.terms.items():
            if sum(te) > t_trunc:
                continue
            mono = TPoly({te: c}, nt, t_trunc)
            for e, x in (exp_poly(g) * mono).terms.items():
                slot = out.setdefault(b, {})
                slot[(z, k, i, e)] = slot.get((z, k, i, e), 0) + x
        return {b: {key: v for key, v in d.items() if v} for b, d in out.items()}

    def to_json(self):
        rows = []
        for (b, g, z, k, i, te), c in sorted(self.terms.items()):
            rows.append({"beta": list(b), "exp": list(g), "z": z, "degree": k, "index": i,
                         "t_exp": list(te), "coeff": _frac_str(c)})
        return rows


@dataclass
class MirrorMap:
    """Coordinates (tau_0, ..., tau_r) of a change of variables as exact series.

    Coordinate 0 multiplies the unit class, coordinate i >= 1 the Picard
    basis divisor L_i.
    """

    ctx: NovikovContext
    coords: list
    t_trunc: int
    source: IFunctionSeries = None

    def corrections(self):
        return [c - NovikovSeries.variable(self.ctx, a) for a, c in enumerate(self.coords)]

    def is_identity(self):
        return all(c.is_zero() for c in self.corrections())

    def tpoly(self, t_trunc=None):
        """beta -> tuple of TPoly coordinates, exp(int_gamma t) expanded."""
        t_trunc = self.t_trunc if t_trunc is None else t_trunc
        nt = self.ctx.nt
        out = {}
        for a, c in enumerate(self.coords):
            for b, terms in c.expand(t_trunc).items():
                polys = out.setdefault(b, [TPoly({}, nt, t_trunc) for _ in range(nt)])
                polys[a] = polys[a] + TPoly({te: v for (_, _, _, te), v in terms.items()}, nt, t_trunc)
        return {b: tuple(p) for b, p in sorted(out.items()) if any(not x.is_zero() for x in p)}

    def to_json(self):
        coords = []
        for b, polys in self.tpoly().items():
            coords.append({
                "beta": list(b),
                "coords": [[{"t_exp": list(e), "coeff": _frac_str(c)} for e, c in sorted(p.terms.items())]
                           for p in polys],
            })
        return {"t_trunc": self.t_trunc, "tau": coords,
                "exact": [c.to_json() for c in self.coords]}


def _context(req):
    return NovikovContext(req.ring, req.A.rank, tuple(req.polarization.coords), req.degree_bound)


def _class_from_series(ctx, s):
    """Convert a t-free ZLaurentSeries into a NovikovSeries (beta = gamma = 0)."""
    return NovikovSeries(ctx, {((0,) * ctx.rank, (0,) * ctx.rank, z, k, i, te): c
                               for (z, k, i, te), c in s.terms.items()})


def _parameter(ctx, coords):
    """coords[0] * 1 + sum_i coords[i] * L_i as a class-valued series."""
    ring = ctx.ring
    out = NovikovSeries.from_class(ctx, ring.one(), coords[0])
    for i, L in enumerate(ring.picard_divisor_classes):
        out = out + NovikovSeries.from_class(ctx, L, coords[i + 1])
    return out


def _identity(ctx):
    return [NovikovSeries.variable(ctx, a) for a in range(ctx.nt)]


def _exact_z_minus_one(I):
    """The z^-1 coefficient of I as an exact class-valued series."""
    req = I.request
    ctx = _context(req)
    t = _parameter(ctx, _identity(ctx))
    total = NovikovSeries(ctx)
    for beta in I.curves():
        C = _class_from_series(ctx, exact_beta_coefficient(req, beta))
        q = NovikovSeries.monomial(ctx, beta=beta.f, gamma=beta.f if I.part == "small_I" else None)
        if I.part == "small_I":
            # [z^-1] e^{t/z} C = sum_m t^m / m! [z^{m-1}] C
            top = max((key[2] for key in C.terms), default=-1)
            tm = NovikovSeries.monomial(ctx)
            for m in range(0, top + 2):
                coeff = C.restrict(lambda key, m=m: key[2] == m - 1)
                piece = tm * coeff * Fraction(1, factorial(m))
                total = total + q * NovikovSeries(ctx, {(b, g, -1, k, i, te): c
                                                        for (b, g, _, k, i, te), c in piece.terms.items()})
                tm = tm * t
        elif I.part == "big_I_k0":
            if beta.is_zero():
                total = total + NovikovSeries(ctx, {(b, g, -1, k, i, te): c for (b, g, _, k, i, te), c in t.terms.items()})
            else:
                total = total + q * C.restrict(lambda key: key[2] == -1)
        else:
            raise ValueError(f"mirror map needs small_I or big_I_k0 input, got {I.part}")
    return ctx, total


def mirror_map(I):
    """tau = z^-1 coefficient of I, in coordinates (tau_0, tau_1, ..., tau_r).

    Raises :class:`MirrorMapNotSmall` when the coefficient leaves H^0 + H^2.
    """
    ctx, zm1 = _exact_z_minus_one(I)
    big = sorted({key[3] for key in zm1.terms if key[3] >= 2})
    if big:
        raise MirrorMapNotSmall(f"z^-1 coefficient has components in divisor degrees {big}")
    ring = ctx.ring
    to_pic = [ring.divisor_coordinates(ring.basis_class(1, i)) for i in range(len(ring.basis[1]))]
    coords = [dict() for _ in range(ctx.nt)]
    for (b, g, _, k, i, te), c in zm1.terms.items():
        if k == 0:
            slot = coords[0]
            slot[(b, g, 0, 0, 0, te)] = slot.get((b, g, 0, 0, 0, te), 0) + c
        else:
            for a, x in enumerate(to_pic[i]):
                if x:
                    slot = coords[a + 1]
                    slot[(b, g, 0, 0, 0, te)] = slot.get((b, g, 0, 0, 0, te), 0) + c * x
    return MirrorMap(ctx, [NovikovSeries(ctx, c) for c in coords], I.t_trunc, I)


def compose(outer, inner):
    """Coordinates of outer(inner(t))."""
    ctx = outer.ctx
    delta = inner.corrections()
    return MirrorMap(ctx, [c.substitute(delta) for c in outer.coords], outer.t_trunc, outer.source)


def invert_mirror_map(tau):
    """Formal inverse t(tau), solved order by order in the Novikov degree."""
    ctx = tau.ctx
    zero = (0,) * ctx.rank
    for a, corr in enumerate(tau.corrections()):
        if any(key[0] == zero for key in corr.terms):
            raise MirrorMapNotInvertible(f"coordinate {a} is not t_{a} to leading Novikov order")
    ident = _identity(ctx)
    G = tau.corrections()
    # t = tau - G(t): iterate from t = tau; each pass fixes one more Novikov order
    current = [NovikovSeries(ctx) for _ in range(ctx.nt)]
    for _ in range(ctx.bound + 2):
        nxt = [-(g.substitute(current)) for g in G]
        if all(x == y for x, y in zip(nxt, current)):
            break
        current = nxt
    return MirrorMap(ctx, [ident[a] + current[a] for a in range(ctx.nt)], tau.t_trunc, tau.source)


def J_from_I(I, tau):
    """Substitute t <- t(tau) into I; identity when tau = t.

    Only the pure change of variables is implemented; derivative
    corrections are outside the supported regime.
    """
    req = I.request
    ctx = tau.ctx
    inverse = invert_mirror_map(tau)
    delta = inverse.corrections()
    ident = _identity(ctx)
    if I.part == "small_I":
        # e^{(tau + delta)/z} sum_beta Q^beta e^{int_beta (tau + delta)} C_beta
        delta_class = _parameter(ctx, delta)
        e_delta = NovikovSeries(ctx, {(b, g, z - 1, k, i, te): c
                                      for (b, g, z, k, i, te), c in delta_class.terms.items()}).exp()
        body = NovikovSeries(ctx)
        for beta in I.curves():
            C = _class_from_series(ctx, exact_beta_coefficient(req, beta))
            pair = NovikovSeries(ctx)
            for i, f in enumerate(beta.f):
                if f:
                    pair = pair + delta[i + 1] * f
            twist = pair.exp() if not pair.is_zero() else NovikovSeries.monomial(ctx)
            body = body + NovikovSeries.monomial(ctx, beta=beta.f, gamma=beta.f) * twist * C
        K = e_delta * body
        prefactor = exp_factor(parameter_class(req), z_power=-1)
    elif I.part == "big_I_k0":
        t_class = _parameter(ctx, [ident[a] + delta[a] for a in range(ctx.nt)])
        K = NovikovSeries.monomial(ctx) + NovikovSeries(ctx, {(b, g, z - 1, k, i, te): c
                                                              for (b, g, z, k, i, te), c in t_class.terms.items()})
        for beta in I.curves():
            if not beta.is_zero():
                C = _class_from_series(ctx, exact_beta_coefficient(req, beta))
                K = K + NovikovSeries.monomial(ctx, beta=beta.f) * C
        prefactor = None
    else:
        raise ValueError(f"J_from_I needs small_I or big_I_k0 input, got {I.part}")

    expanded = K.expand(I.t_trunc)
    out = {}
    for beta in I.curves():
        s = req.series(expanded.get(beta.f, {}))
        out[beta] = prefactor * s if prefactor is not None else s
    for b in expanded:
        if CurveClass(b, req.A.basis_cone) not in out and expanded[b]:
            raise AssertionError(f"J has a term at non-enumerated class {b}")
    return IFunctionSeries(out, I.degree_bound, I.polarization, I.t_trunc, I.z_floor, "J_from_I", req)


def round_trip_ok(tau):
    """inverse(tau(t)) == t exactly on retained Novikov orders."""
    return compose(invert_mirror_map(tau), tau).is_identity()
