"""Hirzebruch surface F_a: weight matrix, intersections, I-function and mirror map.

    python3 scripts/f2_report.py --a 2 --degree-bound 3
"""

import argparse

from toricq.cohomology import build_ring, integrate
from toricq.fan import build_fan, walls
from toricq.givental import beta_coefficient, make_request, residue_k0, small_I
from toricq.mirror import MirrorMapNotSmall, mirror_map, round_trip_ok
from toricq.picard import anticanonical, degree, is_fano, is_nef, ray_divisor_class, wall_curve_class, weight_matrix


def hirzebruch(a):
    # cone {2,3} first so the Picard basis is {D_1, D_4}
    return build_fan(2, [(1, 0), (-1, -a), (0, 1), (0, -1)], [(1, 2), (0, 2), (0, 3), (1, 3)], name=f"F{a}")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--degree-bound", type=int, default=3)
    p.add_argument("--t-trunc", type=int, default=1)
    args = p.parse_args()

    f = hirzebruch(args.a)
    A = weight_matrix(f)
    R = build_ring(f, A)
    c1 = anticanonical(A)
    print(f"{f.name}: A = {[list(r) for r in A.entries]}, c1 = {c1.coords}, Fano: {is_fano(f, A)}")
    for rho in range(f.nrays):
        D = ray_divisor_class(A, rho)
        print(f"  D{rho + 1} = {D.coords}  D{rho + 1}^2 = {integrate(R, R.mul(R.ray_class(rho), R.ray_class(rho)))}"
              f"  nef: {is_nef(f, A, D)}")
    for w in walls(f):
        b = wall_curve_class(f, A, w)
        print(f"  wall over {[i + 1 for i in w.face]}: f = {b.f}, degrees {A.ray_degrees(b)}, c1 = {degree(b, c1)}")

    req = make_request(f, degree_bound=args.degree_bound, t_trunc=args.t_trunc, A=A, ring=R)
    print(f"polarization {req.polarization.coords}, z_floor {req.z_floor}")
    for beta in req.curves()[1:]:
        r = residue_k0(req, beta)
        zs = beta_coefficient(req, beta).z_exponents()
        print(f"  beta {beta.f}: negative rays {sorted(i + 1 for i in r.negative_rays)}, "
              f"virtual codim {r.virtual_codim}, z-range [{min(zs)}, {max(zs)}]")
    try:
        tau = mirror_map(small_I(req))
    except MirrorMapNotSmall as exc:
        print(f"mirror map: {exc}")
        return 0
    for b, polys in tau.tpoly().items():
        print(f"  tau at Q^{b}: " + ", ".join(f"tau_{a} = {p}" for a, p in enumerate(polys)))
    print(f"round trip: {'ok' if round_trip_ok(tau) else 'failed'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
