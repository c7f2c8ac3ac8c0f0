import pytest

from toricq.fan import build_fan, load_fan, projective_space
from toricq.givental import big_I_k0, make_request, small_I
from toricq.mirror import (
    J_from_I,
    MirrorMap,
    MirrorMapNotInvertible,
    MirrorMapNotSmall,
    NovikovSeries,
    compose,
    invert_mirror_map,
    mirror_map,
    round_trip_ok,
)
from toricq.picard import CurveClass


def hirzebruch(a):
    return build_fan(2, [(1, 0), (-1, -a), (0, 1), (0, -1)], [(1, 2), (0, 2), (0, 3), (1, 3)], name=f"F{a}")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pn_mirror_map_is_identity(n):
    req = make_request(projective_space(n), degree_bound=3, t_trunc=2)
    I = small_I(req)
    tau = mirror_map(I)
    assert tau.is_identity()
    J = J_from_I(I, tau)
    for b in I.curves():
        assert J[b] == I[b]


def test_bound_zero_identity():
    req = make_request(load_fan("f2"), degree_bound=0, t_trunc=1)
    assert mirror_map(small_I(req)).is_identity()


def test_f2_mirror_map_nontrivial():
    req = make_request(load_fan("f2"), degree_bound=3, t_trunc=1)
    tau = mirror_map(small_I(req))
    assert not tau.is_identity()
    # the D4-curve contributes -Q^beta e^{int_beta t} to the L_2 = D4 coordinate
    beta = (1, -2)
    corr = tau.corrections()[2]
    assert corr.terms[(beta, beta, 0, 0, 0, (0, 0, 0))] == -1
    assert round_trip_ok(tau)
    inv = invert_mirror_map(tau)
    assert compose(tau, inv).is_identity()


def test_first_order_inversion():
    req = make_request(projective_space(2), degree_bound=2, t_trunc=1)
    ctx = mirror_map(small_I(req)).ctx
    c = NovikovSeries.monomial(ctx, beta=(1,), coeff=5)
    tau = MirrorMap(ctx, [NovikovSeries.variable(ctx, 0), NovikovSeries.variable(ctx, 1) + c], 1)
    inv = invert_mirror_map(tau)
    assert inv.corrections()[1] == -c
    assert inv.corrections()[0].is_zero()
    assert round_trip_ok(tau)


def test_not_invertible():
    req = make_request(projective_space(2), degree_bound=2, t_trunc=1)
    ctx = mirror_map(small_I(req)).ctx
    bad = MirrorMap(ctx, [NovikovSeries.variable(ctx, 0),
                          NovikovSeries.variable(ctx, 1) + NovikovSeries.variable(ctx, 0)], 1)
    with pytest.raises(MirrorMapNotInvertible):
        invert_mirror_map(bad)
    with pytest.raises(MirrorMapNotInvertible):
        J_from_I(small_I(req), bad)


def test_not_small_outside_nef_regime():
    # on F3 the negative section has c1-degree -1; its coefficient has a D4^2 z^-1 term
    req = make_request(hirzebruch(3), degree_bound=2, t_trunc=1, include_exp_factor=False)
    with pytest.raises(MirrorMapNotSmall):
        mirror_map(big_I_k0(req))


def test_j_z_minus_one_coefficient_is_t():
    req = make_request(load_fan("f2"), degree_bound=3, t_trunc=1)
    I = small_I(req)
    J = J_from_I(I, mirror_map(I))
    zero = CurveClass((0, 0))
    for b in J.curves():
        zm1 = J[b].coefficient(-1)
        if b == zero:
            want = {(0, 0): {(1, 0, 0): 1}}
            for a, L in enumerate(req.ring.picard_divisor_classes):
                for i, x in enumerate(L.parts[1]):
                    if x:
                        te = tuple(int(j == a + 1) for j in range(3))
                        want.setdefault((1, i), {})[te] = want.get((1, i), {}).get(te, 0) + x
            assert {k: v.terms for k, v in zm1.items()} == want
        else:
            assert zm1 == {}


def test_tpoly_matches_truncated_I():
    req = make_request(load_fan("f2"), degree_bound=3, t_trunc=2)
    I = small_I(req)
    tau = mirror_map(I)
    polys = tau.tpoly()
    R = req.ring
    for b in I.curves():
        zm1 = I[b].coefficient(-1)
        got = polys.get(b.f)
        for (k, i), p in zm1.items():
            assert k <= 1
        if got is None:
            assert not zm1
            continue
        # unit coordinate
        unit = zm1.get((0, 0))
        assert (unit is None and got[0].is_zero()) or unit == got[0]
        # divisor coordinates: sum_a tau_a L_a must equal the degree-1 part
        for i in range(len(R.basis[1])):
            lhs = zm1.get((1, i))
            rhs = sum((got[a + 1] * L.parts[1][i] for a, L in enumerate(R.picard_divisor_classes)),
                      start=got[0] * 0)
            assert (lhs is None and rhs.is_zero()) or lhs == rhs


def test_big_I_mirror_on_f2():
    req = make_request(load_fan("f2"), degree_bound=3, t_trunc=1, include_exp_factor=False)
    I = big_I_k0(req)
    tau = mirror_map(I)
    assert round_trip_ok(tau)
    J = J_from_I(I, tau)
    assert J.part == "J_from_I"
