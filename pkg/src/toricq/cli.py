"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid fan,
3 outside the implemented regime, 4 comparison failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fan as fanmod
from . import givental, mirror, picard
from .cohomology import build_ring
from .picard import DivisorClass

EXIT_OK, EXIT_IO, EXIT_FAN, EXIT_REGIME, EXIT_MISMATCH = 0, 1, 2, 3, 4


class InputError(Exception):
    """I/O or parse problem; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    fan: str
    basis_cone: int = None
    polarization: str = None
    degree_bound: int = 2
    t_trunc: int = 1
    z_floor: int = None
    part: str = "small_I"
    out: str = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command '{self.command}'")
        if self.degree_bound < 0 or self.t_trunc < 0:
            raise InputError("--degree-bound and --t-trunc must be nonnegative")


def read_fan_data(spec):
    """Parse a fan file (or built-in name); structural problems raise InputError."""
    path = Path(spec)
    if not path.exists():
        builtin = fanmod.DATA_DIR / f"{spec}.json"
        if not builtin.exists():
            raise InputError(f"{spec}: no such file or built-in fan ({', '.join(fanmod.builtin_names())})")
        path = builtin
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    for key, kind in (("dim", int), ("rays", list), ("max_cones", list)):
        if key not in data:
            raise InputError(f"{path}: missing field '{key}'")
        if not isinstance(data[key], kind):
            raise InputError(f"{path}: field '{key}' must be {kind.__name__}")
    for field_name in ("rays", "max_cones"):
        for j, row in enumerate(data[field_name]):
            if not isinstance(row, list) or not all(isinstance(x, int) for x in row):
                raise InputError(f"{path}: field '{field_name}' entry {j + 1} must be a list of integers")
    data.setdefault("name", path.stem)
    return data


def read_fan(spec):
    data = read_fan_data(spec)
    return fanmod.build_fan(data["dim"], data["rays"], [[i - 1 for i in c] for c in data["max_cones"]],
                            data["name"])


def parse_polarization(spec, A):
    kind, _, body = spec.partition(":")
    try:
        values = tuple(int(x) for x in body.split(","))
    except ValueError:
        raise InputError(f"bad polarization '{spec}'") from None
    if kind == "ray":
        return A.from_ray_coords(values)
    if kind == "pic":
        if len(values) != A.rank:
            raise InputError(f"polarization needs {A.rank} Picard coordinates")
        return DivisorClass(values, A.basis_cone)
    raise InputError(f"polarization must start with 'ray:' or 'pic:', got '{spec}'")


def _setup(args):
    f = read_fan(args.fan)
    k = 0
    if args.basis_cone is not None:
        if not 1 <= args.basis_cone <= len(f.max_cones):
            raise InputError(f"--basis-cone must be between 1 and {len(f.max_cones)}")
        k = args.basis_cone - 1
    A = picard.weight_matrix(f, k)
    return f, A


def _cone_str(f, k):
    return "{" + ",".join(str(i + 1) for i in f.max_cones[k]) + "}"


def _matrix_str(rows):
    return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in rows) + "]"


def _emit(args, payload, text):
    if args.format == "json":
        out = json.dumps(payload, indent=1) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def cmd_validate(args):
    data = read_fan_data(args.fan)
    try:
        f = read_fan(args.fan)
    except fanmod.FanError as exc:
        payload = {"valid": False, "name": data["name"], "error": type(exc).__name__, "message": str(exc)}
        _emit(args, payload, f"{data['name']}: invalid: {type(exc).__name__}: {exc}")
        return EXIT_FAN
    ok = fanmod.random_membership_check(f)
    payload = {"valid": True, "name": f.name, "smooth": True, "complete": ok,
               "n": f.dim, "l": f.nrays, "r": f.rank, "max_cones": len(f.max_cones)}
    text = f"{f.name or args.fan}: smooth, complete, l={f.nrays}, r={f.rank}"
    _emit(args, payload, text)
    return EXIT_OK


def info_payload(f, A):
    ring = build_ring(f, A)
    c1 = picard.anticanonical(A)
    walls = fanmod.walls(f)
    wall_rows = []
    for w in walls:
        beta = picard.wall_curve_class(f, A, w)
        wall_rows.append({
            "face": [i + 1 for i in w.face],
            "f": list(beta.f),
            "degrees": list(A.ray_degrees(beta)),
            "c1_degree": picard.degree(beta, c1),
        })
    rays = []
    for rho in range(f.nrays):
        D = picard.ray_divisor_class(A, rho)
        rays.append({"ray": rho + 1, "class": list(D.coords),
                     "nef": picard.is_nef(f, A, D), "ample": picard.is_ample(f, A, D)})
    return {
        "name": f.name,
        "A": [list(r) for r in A.entries],
        "basis_cone": A.basis_cone + 1,
        "basis_cone_rays": [i + 1 for i in f.max_cones[A.basis_cone]],
        "picard_basis_rays": [c + 1 for c in A.complement],
        "anticanonical": list(c1.coords),
        "fano": picard.is_fano(f, A),
        "nef_anticanonical": picard.is_nef(f, A, c1),
        "rays": rays,
        "walls": wall_rows,
        "betti": list(ring.betti),
        "cohomology_basis": ring.basis_labels(),
        "primitive_collections": [[i + 1 for i in s] for s in fanmod.primitive_collections(f)],
    }


def cmd_info(args):
    f, A = _setup(args)
    p = info_payload(f, A)
    lines = [
        f"fan: {f.name}  (n={f.dim}, l={f.nrays}, r={f.rank})",
        f"A = {_matrix_str(A.entries)}",
        f"basis_cone = {_cone_str(f, A.basis_cone)}  (cone {A.basis_cone + 1}; Picard basis D_" +
        ", D_".join(str(c + 1) for c in A.complement) + ")",
        f"anticanonical = {p['anticanonical']}",
        "walls:",
    ]
    for w in p["walls"]:
        lines.append(f"  face {w['face']}: f={w['f']} degrees={w['degrees']} c1={w['c1_degree']}")
    for r in p["rays"]:
        lines.append(f"  D_{r['ray']} = {r['class']}  nef: {str(r['nef']).lower()}  ample: {str(r['ample']).lower()}")
    lines += [
        f"Fano: {str(p['fano']).lower()}",
        f"Betti: ({','.join(str(b) for b in p['betti'])})",
        f"cohomology basis: {p['cohomology_basis']}",
        "primitive collections: " + " ".join("{" + ",".join(map(str, s)) + "}" for s in p["primitive_collections"]),
    ]
    _emit(args, p, "\n".join(lines))
    return EXIT_OK


def _request(args, f, A, include_exp):
    pol = parse_polarization(args.polarization, A) if args.polarization else None
    return givental.make_request(f, A.basis_cone, pol, args.degree_bound, args.t_trunc, args.z_floor,
                                 include_exp_factor=include_exp, A=A)


def _series_text(I):
    lines = [f"part: {I.part}  degree_bound={I.degree_bound} t_trunc={I.t_trunc} z_floor={I.z_floor}"]
    for beta, s in I.series.items():
        lines.append(f"beta f={list(beta.f)}:")
        for row in s.to_json():
            lines.append(f"  z^{row['z']} t^{row['t_exp']}: {row['class']}")
    return "\n".join(lines)


def cmd_ifun(args):
    f, A = _setup(args)
    req = _request(args, f, A, args.part == "small_I")
    I = givental.i_function(req)
    _emit(args, I.to_json(), _series_text(I))
    return EXIT_OK


def cmd_mirror(args):
    f, A = _setup(args)
    req = _request(args, f, A, args.part == "small_I")
    I = givental.i_function(req)
    tau = mirror.mirror_map(I)
    ok = mirror.round_trip_ok(tau)
    J = mirror.J_from_I(I, tau)
    payload = {"part": "mirror_map", "source": I.part, "fan": f.name,
               "basis_cone": A.basis_cone + 1, "identity": tau.is_identity(),
               "round_trip": "ok" if ok else "failed", "mirror_map": tau.to_json(), "J_from_I": J.to_json()}
    lines = [f"mirror map of {I.part} on {f.name}: {'identity' if tau.is_identity() else 'nontrivial'}"]
    for beta, polys in tau.tpoly().items():
        lines.append(f"  beta f={list(beta)}: " + ", ".join(f"tau_{a}: {p}" for a, p in enumerate(polys)))
    lines.append(f"round trip: {'ok' if ok else 'failed'}")
    lines.append(_series_text(J))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def compare_series(a, b):
    """Per-coefficient comparison of two I-function families."""
    diffs, total = [], 0
    for beta in sorted(set(a.series) | set(b.series)):
        ta = a.series[beta].terms if beta in a.series else {}
        tb = b.series[beta].terms if beta in b.series else {}
        for key in sorted(set(ta) | set(tb)):
            total += 1
            x, y = ta.get(key, 0), tb.get(key, 0)
            if x != y:
                z, k, i, te = key
                diffs.append({"beta": list(beta.f), "z": z, "degree": k, "index": i, "t_exp": list(te),
                              "small_I": str(x), "J_oracle": str(y)})
    return diffs, total


def cmd_compare_pn(args):
    f, A = _setup(args)
    if not fanmod.is_projective_space(f):
        print(f"{f.name}: not a projective-space fan", file=sys.stderr)
        return EXIT_REGIME
    pol = parse_polarization(args.polarization, A) if args.polarization else None
    req = givental.make_request(f, A.basis_cone, pol, args.degree_bound, args.t_trunc, args.z_floor, A=A)
    I = givental.small_I(req)
    J = givental.closed_form_J_Pn(f.dim, args.degree_bound, args.t_trunc, req.z_floor, fan=f, A=A)
    diffs, total = compare_series(I, J)
    pct = 100.0 * (total - len(diffs)) / total if total else 100.0
    payload = {"fan": f.name, "n": f.dim, "degree_bound": args.degree_bound, "t_trunc": args.t_trunc,
               "z_floor": req.z_floor, "coefficients": total, "mismatches": len(diffs),
               "identical": not diffs, "diff": diffs}
    text = f"compare {f.name}: {total} coefficients, identical: {pct:.0f}%"
    if diffs:
        text += "\n" + "\n".join(json.dumps(d) for d in diffs)
    _emit(args, payload, text)
    return EXIT_OK if not diffs else EXIT_MISMATCH


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "ifun": cmd_ifun,
    "mirror": cmd_mirror,
    "compare-pn": cmd_compare_pn,
}


def _nonneg(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which would collide with "invalid fan"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="toricq", description="Toric fans, cohomology and I-functions in exact arithmetic.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--fan", required=True, help="fan JSON file or built-in name (" + ", ".join(fanmod.builtin_names()) + ")")
    p.add_argument("--basis-cone", type=int, help="1-based maximal cone fixing the Picard basis (default 1)")
    p.add_argument("--polarization", help="ray:a1,...,al or pic:c1,...,cr (default: first ample class)")
    p.add_argument("--degree-bound", type=_nonneg, default=2, help="largest polarization degree of beta (default 2)")
    p.add_argument("--t-trunc", type=_nonneg, default=1, help="largest total degree in t_0..t_r (default 1)")
    p.add_argument("--z-floor", type=int,
                   help="lowest z-power kept; default -(n + degree_bound*m + t_trunc + 2) with m the "
                        "largest anticanonical degree of a wall curve")
    p.add_argument("--part", choices=["small_I", "big_I_k0"], default="small_I")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=["json", "text"], default="json")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**vars(args))
        return COMMANDS[config.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except fanmod.FanError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAN
    except (mirror.MirrorMapNotSmall, mirror.MirrorMapNotInvertible) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except picard.NotAmplePolarization as exc:
        print(f"NotAmplePolarization: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
