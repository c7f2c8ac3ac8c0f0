"""Givental-style I-functions of a smooth projective toric variety.

The coefficient of Q^beta is the product over rays of

    prod_{j<=0} (D_rho + j z) / prod_{j<=d_rho} (D_rho + j z),

with d_rho = beta . D_rho. For d_rho >= 0 this is 1 / prod_{j=1}^{d_rho}(D_rho + j z);
for d_rho < 0 it is the polynomial prod_{j=d_rho+1}^{0}(D_rho + j z), which
contains the j = 0 factor D_rho itself.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from . import picard
from .cohomology import build_ring
from .fan import projective_space
from .picard import CurveClass, anticanonical, degree, enumerate_effective, wall_curves, weight_matrix
from .series import (
    ZLaurentSeries,
    exp_factor,
    parameter_series,
    zl_invert_unit,
    zl_monomial,
    zl_one,
)

PARTS = ("small_I", "big_I_k0", "J_oracle", "J_from_I", "mirror_map")


def default_z_floor(fan, A, degree_bound, t_trunc):
    """-(n + degree_bound * m + t_trunc + 2), m the largest c1-degree of a wall curve.

    Every retained beta is a sum of at most ``degree_bound`` wall curves, so
    its coefficient has no z-power below -(n + c1.beta) before the e^{t/z}
    factor lowers it by at most t_trunc.
    """
    c1 = anticanonical(A)
    m = max([0] + [degree(b, c1) for b in wall_curves(fan, A)])
    return -(fan.dim + degree_bound * m + t_trunc + 2)


def worker_count():
    try:
        return max(1, int(os.environ.get("TORICQ_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class IFunctionRequest:
    fan: object
    A: object
    ring: object
    polarization: object
    degree_bound: int
    t_trunc: int
    z_floor: int
    include_exp_factor: bool = True
    _exact: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.degree_bound < 0 or self.t_trunc < 0:
            raise ValueError("degree_bound and t_trunc must be nonnegative")
        if not picard.is_ample(self.fan, self.A, self.polarization):
            raise picard.NotAmplePolarization(f"polarization {self.polarization.coords} is not ample")

    @property
    def nt(self):
        """Number of parameters t_0..t_r."""
        return self.A.rank + 1

    def series(self, terms=None):
        return ZLaurentSeries(self.ring, self.nt, self.t_trunc, self.z_floor, terms or {})

    def curves(self):
        """beta = 0 followed by the effective classes up to the degree bound."""
        zero = picard.zero_curve(self.A)
        return [zero] + enumerate_effective(self.fan, self.A, self.polarization, self.degree_bound)


def make_request(fan, basis_cone=0, polarization=None, degree_bound=2, t_trunc=1, z_floor=None,
                 include_exp_factor=True, A=None, ring=None):
    A = A if A is not None else weight_matrix(fan, basis_cone)
    ring = ring if ring is not None else build_ring(fan, A)
    if polarization is None:
        polarization = picard.default_polarization(fan, A)
    if z_floor is None:
        z_floor = default_z_floor(fan, A, degree_bound, t_trunc)
    return IFunctionRequest(fan, A, ring, polarization, degree_bound, t_trunc, z_floor, include_exp_factor)


@dataclass
class IFunctionSeries:
    """Novikov-graded family beta -> ZLaurentSeries."""

    series: dict
    degree_bound: int
    polarization: object
    t_trunc: int
    z_floor: int
    part: str
    request: object = None

    def __getitem__(self, beta):
        return self.series[beta]

    def curves(self):
        return list(self.series)

    def to_json(self, extra=None):
        req = self.request
        meta = {
            "part": self.part,
            "fan": req.fan.name if req is not None else "",
            "basis_cone": (req.A.basis_cone + 1) if req is not None else None,
            "basis_cone_rays": [i + 1 for i in req.fan.max_cones[req.A.basis_cone]] if req is not None else None,
            "polarization": list(self.polarization.coords) if self.polarization is not None else None,
            "degree_bound": self.degree_bound,
            "t_trunc": self.t_trunc,
            "z_floor": self.z_floor,
        }
        if req is not None:
            meta["basis"] = req.ring.basis_labels()
        if extra:
            meta.update(extra)
        meta["series"] = [{"beta": list(b.f), "terms": s.to_json()} for b, s in self.series.items()]
        return meta


# -- beta coefficients ---------------------------------------------------

def _linear_factor(req, rho, j):
    """D_rho + j z, exact in z."""
    ring = req.ring
    d = zl_monomial(ring, req.nt, req.t_trunc, _NO_FLOOR, cls=ring.ray_class(rho))
    return d + zl_monomial(ring, req.nt, req.t_trunc, _NO_FLOOR, z=1, coeff=j)


_NO_FLOOR = -(10**9)


def exact_beta_coefficient(req, beta):
    """beta coefficient without z truncation (t-independent)."""
    key = beta.f
    hit = req._exact.get(key)
    if hit is not None:
        return hit
    one = zl_one(req.ring, req.nt, req.t_trunc, _NO_FLOOR)
    numer = one
    inverses = []
    for rho, d in enumerate(req.A.ray_degrees(beta)):
        if d >= 0:
            for j in range(1, d + 1):
                inverses.append(zl_invert_unit(_linear_factor(req, rho, j)))
        else:
            for j in range(d + 1, 1):
                numer = numer * _linear_factor(req, rho, j)
    out = numer
    for inv in inverses:
        out = out * inv
    req._exact[key] = out
    return out


def beta_coefficient(req, beta):
    return req.series(exact_beta_coefficient(req, beta).terms)


def integral_parameter(req, beta):
    """int_beta t = sum_i t_i f_i as a z-free series."""
    ring = req.ring
    classes = [ring.zero()] + [ring.scalar(f) for f in beta.f]
    return parameter_series(ring, req.nt, req.t_trunc, req.z_floor, classes)


def parameter_class(req):
    """t = t_0 * 1 + sum_i t_i L_i as a z-free series."""
    ring = req.ring
    return parameter_series(ring, req.nt, req.t_trunc, req.z_floor, [ring.one()] + ring.picard_divisor_classes)


def _map_curves(fn, curves):
    workers = worker_count()
    if workers == 1:
        return [fn(b) for b in curves]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, curves))


def small_I(req):
    """e^{t/z} sum_beta Q^beta e^{int_beta t} (beta coefficient)."""
    if not req.include_exp_factor:
        raise ValueError("small_I needs include_exp_factor=True")
    prefactor = exp_factor(parameter_class(req), z_power=-1)

    def term(beta):
        s = prefactor * beta_coefficient(req, beta)
        if not beta.is_zero():
            s = s * exp_factor(integral_parameter(req, beta), z_power=0)
        return s

    curves = req.curves()
    return IFunctionSeries(dict(zip(curves, _map_curves(term, curves))), req.degree_bound,
                           req.polarization, req.t_trunc, req.z_floor, "small_I", req)


def big_I_k0(req):
    """The k = 0 part of the big I-function: 1 + t/z plus bare beta coefficients.

    The k >= 1 summands need virtual classes of quasimap moduli and are not
    computed; the output is tagged ``big_I_k0``.
    """
    if req.include_exp_factor:
        raise ValueError("big_I_k0 needs include_exp_factor=False")
    t = parameter_class(req)
    unit = req.series(zl_one(req.ring, req.nt, req.t_trunc, req.z_floor).terms)
    lead = unit + t.like({(-1, k, i, te): v for (_, k, i, te), v in t.terms.items()})
    curves = req.curves()
    values = _map_curves(lambda b: lead if b.is_zero() else beta_coefficient(req, b), curves)
    return IFunctionSeries(dict(zip(curves, values)), req.degree_bound, req.polarization,
                           req.t_trunc, req.z_floor, "big_I_k0", req)


def i_function(req):
    return small_I(req) if req.include_exp_factor else big_I_k0(req)


# -- k = 0 fixed-locus residue and dimensions ----------------------------

@dataclass(frozen=True)
class ResidueClassK0:
    beta: CurveClass
    negative_rays: frozenset
    pushforward: ZLaurentSeries
    virtual_codim: int


def residue_k0(req, beta):
    """Push-forward of 1/e(N^vir) at the k = 0 fixed locus, with its codimension.

    The fixed locus is the intersection of the D_rho with beta . D_rho < 0;
    the push-forward coincides with the beta coefficient of the I-function.
    """
    if beta.is_zero():
        raise ValueError("residue_k0 needs beta != 0")
    d = req.A.ray_degrees(beta)
    neg = frozenset(rho for rho, x in enumerate(d) if x < 0)
    codim = degree(beta, anticanonical(req.A)) + len(neg)
    return ResidueClassK0(beta, neg, beta_coefficient(req, beta), codim)


def _c1_degree(fan, beta):
    A = weight_matrix(fan, beta.basis_cone)
    return degree(beta, anticanonical(A))


def vdim_quasimap(fan, g, k, beta):
    """(1 - g)(dim X - 3) + k + int_beta c1(T_X)."""
    if g < 0 or k < 0:
        raise ValueError("g and k must be nonnegative")
    return (1 - g) * (fan.dim - 3) + k + _c1_degree(fan, beta)


def vdim_stable_maps(fan, g, k, beta):
    """Virtual dimension of the stable-map space, c1 taken as sum_rho d_rho."""
    A = weight_matrix(fan, beta.basis_cone)
    return (1 - g) * (fan.dim - 3) + k + sum(A.ray_degrees(beta))


def vdim_graph(fan, k, beta):
    """dim X + k + int_beta c1(T_X) for the genus-zero graph space."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return fan.dim + k + _c1_degree(fan, beta)


# -- closed form for projective space ------------------------------------

def _hseries_mul(a, b, n, t_trunc, z_floor):
    out = {}
    for (z1, h1, t1), c1 in a.items():
        for (z2, h2, t2), c2 in b.items():
            h = h1 + h2
            t = (t1[0] + t2[0], t1[1] + t2[1])
            z = z1 + z2
            if h > n or sum(t) > t_trunc or z < z_floor:
                continue
            out[(z, h, t)] = out.get((z, h, t), 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _closed_form_terms(n, d, t_trunc, z_floor):
    """e^{t/z} e^{d t_1} / prod_{j=1}^d (H + jz)^{n+1} in Q[H]/(H^{n+1})."""
    one = {(0, 0, (0, 0)): Fraction(1)}
    # (H + jz)^{-(n+1)} = sum_k binom(-(n+1), k) H^k (jz)^{-(n+1)-k}
    s = one
    for j in range(1, d + 1):
        f = {}
        for k in range(n + 1):
            c = (-1) ** k * comb(n + k, k) * Fraction(1, j ** (n + 1 + k))
            f[(-(n + 1) - k, k, (0, 0))] = c
        s = _hseries_mul(s, f, n, t_trunc, _NO_FLOOR)
    # e^{d t_1}
    e = {(0, 0, (0, m)): Fraction(d ** m, factorial(m)) for m in range(t_trunc + 1)}
    s = _hseries_mul(s, e, n, t_trunc, _NO_FLOOR)
    # e^{(t_0 + t_1 H)/z}
    p = {}
    for a in range(t_trunc + 1):
        for b in range(min(n, t_trunc - a) + 1):
            p[(-(a + b), b, (a, b))] = Fraction(1, factorial(a) * factorial(b))
    return _hseries_mul(s, p, n, t_trunc, z_floor)


def closed_form_J_Pn(n, degree_bound, t_trunc, z_floor=None, fan=None, A=None):
    """J-function of P^n from its closed form, expanded in one variable H.

    ``fan`` may be any projective-space fan (default: the standard one); it
    only supplies the cohomology basis the result is written in.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    fan = fan if fan is not None else projective_space(n)
    if fan.dim != n or fan.rank != 1:
        raise ValueError(f"fan is not P^{n}")
    A = A if A is not None else weight_matrix(fan)
    req = make_request(fan, A.basis_cone, picard.DivisorClass((1,), A.basis_cone), degree_bound, t_trunc,
                       z_floor, A=A)
    ring = req.ring
    H = ring.ray_class(0)
    hpow = [ring.power(H, k) for k in range(n + 1)]
    out = {}
    for d in range(degree_bound + 1):
        terms = {}
        for (z, h, t), c in _closed_form_terms(n, d, t_trunc, req.z_floor).items():
            for k, part in enumerate(hpow[h].parts):
                for i, x in enumerate(part):
                    if x:
                        key = (z, k, i, t)
                        terms[key] = terms.get(key, 0) + c * x
        out[CurveClass((d,), req.A.basis_cone)] = req.series(terms)
    return IFunctionSeries(out, degree_bound, req.polarization, t_trunc, req.z_floor, "J_oracle", req)
