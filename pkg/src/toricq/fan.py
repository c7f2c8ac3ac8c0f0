"""Complete nonsingular fans: validation, walls and primitive collections."""

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import linalg


class FanError(ValueError):
    """Base class for invalid fan input."""


class DimensionMismatch(FanError):
    pass


class NonPrimitiveRay(FanError):
    pass


class NonUnimodularCone(FanError):
    pass


class NotComplete(FanError):
    pass


class NotAFan(FanError):
    pass


@dataclass(frozen=True)
class Ray:
    coords: tuple

    def __post_init__(self):
        if not any(self.coords):
            raise NonPrimitiveRay(f"ray {self.coords} is zero")
        if math.gcd(*self.coords) != 1:
            raise NonPrimitiveRay(f"ray {self.coords} is not primitive")


@dataclass(frozen=True)
class Cone:
    ray_indices: tuple

    def __contains__(self, i):
        return i in self.ray_indices

    def __len__(self):
        return len(self.ray_indices)

    def __iter__(self):
        return iter(self.ray_indices)


@dataclass(frozen=True)
class Wall:
    """A codimension-one cone together with its integral ray relation.

    ``relation`` lists ``(ray_index, coefficient)`` pairs over the n+1 rays
    of the two adjacent maximal cones; the two off-face rays carry +1.
    """

    face: Cone
    sides: tuple
    relation: tuple

    def degrees(self, nrays):
        """Relation extended by zero to all rays."""
        d = [0] * nrays
        for i, c in self.relation:
            d[i] = c
        return tuple(d)


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple
    max_cones: tuple
    name: str = ""
    _inverses: tuple = field(default=(), repr=False, compare=False)

    @property
    def nrays(self):
        return len(self.rays)

    @property
    def rank(self):
        """Picard rank r = l - n."""
        return len(self.rays) - self.dim

    def ray_matrix(self, cone):
        return [list(self.rays[i].coords) for i in cone]

    def cone_coordinates(self, k, point):
        """Coordinates of ``point`` in the ray basis of maximal cone ``k``."""
        inv = self._inverses[k]
        return [sum(inv[i][j] * point[j] for j in range(self.dim)) for i in range(self.dim)]

    def contains(self, k, point, interior=False):
        coords = self.cone_coordinates(k, point)
        if interior:
            return all(c > 0 for c in coords)
        return all(c >= 0 for c in coords)

    def cone_index(self, indices):
        key = tuple(sorted(indices))
        for k, c in enumerate(self.max_cones):
            if c.ray_indices == key:
                return k
        raise KeyError(f"no maximal cone with rays {key}")

    def in_some_cone(self, subset):
        s = set(subset)
        return any(s <= set(c.ray_indices) for c in self.max_cones)


def _inverse_columns(fan_dim, matrix):
    # matrix rows are rays; we need M with M @ p = coordinates, i.e. (R^T)^{-1}
    rt = linalg.transpose(matrix)
    cols = [linalg.solve(rt, [Fraction(int(i == j)) for i in range(fan_dim)]) for j in range(fan_dim)]
    return tuple(tuple(int(x) for x in row) for row in linalg.transpose(cols))


def build_fan(dim, rays, max_cones, name=""):
    """Validate and build a fan from 0-based cone index sets.

    Raises the first violated invariant as a :class:`FanError` subclass.
    """
    if dim < 1 or not rays or not max_cones:
        raise DimensionMismatch("dimension, rays and cones must be nonempty")
    for i, v in enumerate(rays):
        if len(v) != dim:
            raise DimensionMismatch(f"ray {i + 1} has length {len(v)}, expected {dim}")
    ray_objs = []
    for i, v in enumerate(rays):
        try:
            ray_objs.append(Ray(tuple(int(x) for x in v)))
        except NonPrimitiveRay as exc:
            raise NonPrimitiveRay(f"ray {i + 1}: {exc}") from None
    if len(set(r.coords for r in ray_objs)) != len(ray_objs):
        raise NotAFan("duplicate rays")

    cones = []
    for k, c in enumerate(max_cones):
        idx = tuple(sorted(int(i) for i in c))
        if len(idx) != dim or len(set(idx)) != dim:
            raise DimensionMismatch(f"cone {k + 1} has {len(set(idx))} distinct rays, expected {dim}")
        if idx[0] < 0 or idx[-1] >= len(rays):
            raise DimensionMismatch(f"cone {k + 1} references a ray out of range")
        cones.append(Cone(idx))
    if len(set(cones)) != len(cones):
        raise NotAFan("duplicate maximal cones")

    inverses = []
    for k, c in enumerate(cones):
        d = linalg.det([list(ray_objs[i].coords) for i in c])
        if abs(d) != 1:
            raise NonUnimodularCone(f"cone {k + 1} {_one_based(c)} has determinant {d}")
        inverses.append(_inverse_columns(dim, [list(ray_objs[i].coords) for i in c]))

    fan = Fan(dim, tuple(ray_objs), tuple(cones), name, tuple(inverses))
    _check_complete(fan)
    return fan


def _one_based(cone):
    return "{" + ",".join(str(i + 1) for i in cone) + "}"


def _ridges(fan):
    """Map each (n-1)-face to the maximal cones containing it."""
    ridges = {}
    for k, c in enumerate(fan.max_cones):
        for face in combinations(c.ray_indices, fan.dim - 1):
            ridges.setdefault(face, []).append(k)
    return ridges


def _check_complete(fan):
    n = fan.dim
    if fan.rank < 1:
        raise NotComplete(f"l = {fan.nrays} rays in dimension {n}; need at least n + 1")
    used = {i for c in fan.max_cones for i in c}
    if len(used) != fan.nrays:
        missing = sorted(set(range(fan.nrays)) - used)
        raise NotAFan(f"ray {missing[0] + 1} lies in no maximal cone")

    ridges = _ridges(fan)
    for face, ks in ridges.items():
        if len(ks) == 1:
            raise NotComplete(f"face {_one_based(face)} of cone {_one_based(fan.max_cones[ks[0]])} lies in only one maximal cone")
        if len(ks) > 2:
            raise NotAFan(f"face {_one_based(face)} lies in {len(ks)} maximal cones")

    # adjacency graph must be connected
    seen = {0}
    stack = [0]
    adj = {}
    for ks in ridges.values():
        a, b = ks
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    while stack:
        k = stack.pop()
        for j in adj.get(k, ()):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != len(fan.max_cones):
        raise NotComplete("maximal cones do not form a connected adjacency graph")

    # adjacent cones lie on opposite sides of their common face
    for face, (a, b) in ridges.items():
        (v,) = set(fan.max_cones[b]) - set(face)
        (u,) = set(fan.max_cones[a]) - set(face)
        coords = dict(zip(fan.max_cones[a], fan.cone_coordinates(a, fan.rays[v].coords)))
        if coords[u] >= 0:
            raise NotAFan(f"cones {_one_based(fan.max_cones[a])} and {_one_based(fan.max_cones[b])} overlap across face {_one_based(face)}")

    # covering degree: a generic point lies in the interior of exactly one cone
    rng = random.Random(20101)
    for _ in range(3):
        p = _generic_point(fan, rng)
        hits = sum(fan.contains(k, p, interior=True) for k in range(len(fan.max_cones)))
        if hits != 1:
            raise NotAFan(f"maximal cones overlap: a generic point lies in {hits} cones")


def _generic_point(fan, rng):
    while True:
        p = [Fraction(rng.randint(-997, 997), rng.randint(1, 89)) for _ in range(fan.dim)]
        if all(all(c != 0 for c in fan.cone_coordinates(k, p)) for k in range(len(fan.max_cones))):
            return p


def random_membership_check(fan, samples=100, seed=0):
    """Check that random rational points each lie in some maximal cone."""
    rng = random.Random(seed)
    for _ in range(samples):
        p = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 100)) for _ in range(fan.dim)]
        if not any(fan.contains(k, p) for k in range(len(fan.max_cones))):
            return False
    return True


def walls(fan):
    """One wall per codimension-one cone, in order of the sorted face."""
    out = []
    for face, (a, b) in sorted(_ridges(fan).items()):
        (u,) = set(fan.max_cones[a]) - set(face)
        (v,) = set(fan.max_cones[b]) - set(face)
        # v = -u - sum_k c_k w_k  <=>  u + v + sum_k c_k w_k = 0
        coords = dict(zip(fan.max_cones[a], fan.cone_coordinates(a, fan.rays[v].coords)))
        assert coords[u] == -1, "smoothness forces the off-face coefficient"
        rel = {u: 1, v: 1}
        for w in face:
            rel[w] = -int(coords[w])
        relation = tuple(sorted(rel.items()))
        total = [sum(c * fan.rays[i].coords[j] for i, c in relation) for j in range(fan.dim)]
        assert not any(total)
        out.append(Wall(Cone(face), (a, b), relation))
    return out


def primitive_collections(fan):
    """Minimal ray subsets contained in no cone, sorted lexicographically."""
    found = []
    for size in range(2, fan.dim + 2):
        for s in combinations(range(fan.nrays), size):
            if any(set(p) <= set(s) for p in found):
                continue
            if not fan.in_some_cone(s):
                found.append(s)
    return sorted(found)


def fan_from_dict(data):
    """Build a fan from the JSON file layout (1-based cone indices)."""
    try:
        dim = data["dim"]
        rays = data["rays"]
        cones = [[int(i) - 1 for i in c] for c in data["max_cones"]]
    except (KeyError, TypeError) as exc:
        raise DimensionMismatch(f"malformed fan description: missing or bad field {exc}") from None
    return build_fan(int(dim), rays, cones, data.get("name", ""))


def fan_to_dict(fan):
    d = {
        "dim": fan.dim,
        "rays": [list(r.coords) for r in fan.rays],
        "max_cones": [[i + 1 for i in c] for c in fan.max_cones],
    }
    if fan.name:
        d["name"] = fan.name
    return d


DATA_DIR = Path(__file__).parent / "data" / "fans"


def builtin_names():
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))


def load_fan(path_or_name):
    """Load a fan from a JSON file, or by built-in name (p1, p2, p3, p1xp1, f2)."""
    p = Path(path_or_name)
    if not p.exists() and (DATA_DIR / f"{path_or_name}.json").exists():
        p = DATA_DIR / f"{path_or_name}.json"
    with open(p) as fh:
        data = json.load(fh)
    return fan_from_dict(data)


def projective_space(n):
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = list(combinations(range(n + 1), n))
    return build_fan(n, rays, cones, f"P{n}")


def product(fan_a, fan_b):
    """Fan of the product variety; rays of ``fan_a`` come first."""
    n = fan_a.dim + fan_b.dim
    rays = [list(r.coords) + [0] * fan_b.dim for r in fan_a.rays]
    rays += [[0] * fan_a.dim + list(r.coords) for r in fan_b.rays]
    cones = [
        list(a.ray_indices) + [fan_a.nrays + i for i in b.ray_indices]
        for a in fan_a.max_cones
        for b in fan_b.max_cones
    ]
    name = f"{fan_a.name}x{fan_b.name}" if fan_a.name and fan_b.name else ""
    return build_fan(n, rays, cones, name)


def is_projective_space(fan):
    """n+1 rays summing to zero with every n-subset a maximal cone."""
    n = fan.dim
    if fan.nrays != n + 1:
        return False
    if any(sum(r.coords[j] for r in fan.rays) for j in range(n)):
        return False
    return {c.ray_indices for c in fan.max_cones} == set(combinations(range(n + 1), n))
