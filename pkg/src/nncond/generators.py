"""Deterministic training-set generators.

``gen_adversarial`` builds the layered R^3 instance on which FCNN's subset
grows like kappa / xi. ``gen_voronoi`` builds uniform points labeled by the
class of their nearest random site, and ``gen_gaussian_blobs`` a small
overlapping-blob demo set.

Layer layout of the adversarial instance (c_i = (0, 0, 2i)):

* base B: red c_0 and y_1..y_8 on its unit circle, each in its own class 1..8;
* multiplier M_i, i = 1..t-3: blue c_{2i} ringed by 2^(2+i) red r_ij, red
  c_{2i+1} ringed by blue b_ij at the same angles and white w_ij at the
  half-step angles shifted by -xi^2, and a white midpoint m_i;
* repetitive R_i, i = t-2..2^t: blue c_{2i} ringed by 2^t red points, red
  c_{2i+1} ringed by 2^t blue points at the same angles;
* far field F: blue and white anchor clusters far along +x, plus a red
  counterweight cluster far below, placed so that the class centroids are
  c_0, y_1..y_8 and the two anchors.

Centers of M_i and R_i layers are colored as in the layer descriptions
(c_{2i} blue, c_{2i+1} red); only under this coloring does each red ring
point pick the blue point straight above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import InvalidInputError, TrainingSet, sq_dist_block

CLASS_NAMES = tuple(str(j) for j in range(1, 9)) + ("red", "blue", "white")


@dataclass(frozen=True)
class AdvParams:
    t: int
    far_scale: float | None = None
    mass_factor: int = 2

    def __post_init__(self):
        if not isinstance(self.t, (int, np.integer)) or self.t <= 3:
            raise InvalidInputError(f"t must be an integer > 3, got {self.t!r}")
        if self.t > 12:
            raise InvalidInputError(f"t={self.t} exceeds the supported maximum of 12")
        if self.mass_factor < 1:
            raise InvalidInputError("mass_factor must be >= 1")

    @property
    def xi(self) -> float:
        return math.ldexp(1.0, -self.t)


@dataclass
class AdversarialSet:
    ts: TrainingSet
    manifest: dict
    # Index ranges of the named blocks, e.g. blocks["B"] == (0, 9).
    blocks: dict

    def block_indices(self, name: str) -> np.ndarray:
        lo, hi = self.blocks[name]
        return np.arange(lo, hi)


def expected_size(t: int, far_field: int = 0) -> int:
    """Closed-form point count of the adversarial set."""
    m = sum(3 * (1 + 2 ** (2 + i)) for i in range(1, t - 2))
    r = (2 ** t - t + 3) * 2 * (1 + 2 ** t)
    return 9 + m + r + far_field


class _Builder:
    def __init__(self):
        self.coords: list[tuple[float, float, float]] = []
        self.labels: list[str] = []
        self.blocks: dict[str, tuple[int, int]] = {}
        self._open: tuple[str, int] | None = None

    def begin(self, name):
        self._open = (name, len(self.coords))

    def end(self):
        name, lo = self._open
        self.blocks[name] = (lo, len(self.coords))
        self._open = None

    def point(self, xyz, label):
        self.coords.append(tuple(float(v) for v in xyz))
        self.labels.append(label)

    def ring(self, center, angles, label, radius=1.0):
        cx, cy, cz = center
        for th in angles:
            x, y = radius * math.cos(th), radius * math.sin(th)
            if radius == 1.0:
                x, y = _unit_offset(x, y)
            self.point((cx + x, cy + y, cz), label)


def _unit_offset(x: float, y: float) -> tuple[float, float]:
    # cos^2 + sin^2 may round below 1; push the offset out by a few ulps so a
    # ring point never beats an exactly-unit-distance point on a distance tie.
    # Valid because every unit ring is centered on the z-axis.
    while x * x + y * y < 1.0:
        x, y = x * (1 + 2 ** -52), y * (1 + 2 ** -52)
    return x, y


def _backbone(i: int) -> tuple[float, float, float]:
    return (0.0, 0.0, 2.0 * i)


def gen_adversarial(params: AdvParams | int) -> AdversarialSet:
    """Build the layered instance for ``xi = 2**-t``."""
    if not isinstance(params, AdvParams):
        params = AdvParams(int(params))
    t, xi = params.t, params.xi
    inv_xi = 2 ** t
    b = _Builder()

    b.begin("B")
    b.point(_backbone(0), "red")
    for j in range(1, 9):
        b.ring(_backbone(0), [j * math.pi / 4], str(j))
    b.end()

    for i in range(1, t - 2):
        b.begin(f"M_{i}")
        lo_c, hi_c = _backbone(2 * i), _backbone(2 * i + 1)
        b.point(lo_c, "blue")
        b.point(hi_c, "red")
        b.point((0.0, 0.0, (lo_c[2] + hi_c[2]) / 2), "white")
        k = 2 ** (2 + i)
        step = math.pi / 2 ** (1 + i)
        b.ring(lo_c, [j * step for j in range(1, k + 1)], "red")
        b.ring(hi_c, [j * step for j in range(1, k + 1)], "blue")
        b.ring(hi_c, [(j + 0.5) * step - xi * xi for j in range(1, k + 1)], "white")
        b.end()

    for i in range(t - 2, inv_xi + 1):
        b.begin(f"R_{i}")
        lo_c, hi_c = _backbone(2 * i), _backbone(2 * i + 1)
        b.point(lo_c, "blue")
        b.point(hi_c, "red")
        angles = [2 * j * math.pi * xi for j in range(1, inv_xi + 1)]
        b.ring(lo_c, angles, "red")
        b.ring(hi_c, angles, "blue")
        b.end()

    main = np.asarray(b.coords)
    main_labels = np.asarray(b.labels)
    max_z = 2.0 * (2 * inv_xi + 1)
    far = params.far_scale if params.far_scale is not None else 100.0 * (max_z + 1.0)
    rho = xi * xi / 8

    n_blue = int(np.sum(main_labels == "blue"))
    n_white = int(np.sum(main_labels == "white"))
    red_z = main[main_labels == "red", 2]
    red_z_sum = float(np.sum(red_z))
    z0 = 10.0 * max_z
    n_counter = max(1, int(red_z_sum // z0))
    depth = red_z_sum / n_counter

    def anchored_arc(name, x, count, label):
        # Arc on the far side of the anchor: every arc point is strictly farther
        # than the anchor from any point with smaller x (where the class mean lies).
        b.begin(name)
        b.point((x, 0.0, 0.0), label)
        b.ring((x, 0.0, 0.0), np.linspace(-math.pi / 3, math.pi / 3, count), label, radius=rho)
        b.end()

    anchored_arc("F_blue", far, params.mass_factor * n_blue + 1, "blue")
    anchored_arc("F_white", 1.1 * far, params.mass_factor * n_white + 1, "white")
    b.begin("F_red")
    b.ring((0.0, 0.0, -depth), [2 * math.pi * k / n_counter for k in range(n_counter)], "red", radius=rho)
    b.end()

    ts = TrainingSet.from_labels(np.asarray(b.coords), b.labels)

    f_size = sum(hi - lo for name, (lo, hi) in b.blocks.items() if name.startswith("F_"))
    manifest = {
        "t": t,
        "xi": xi,
        "n": ts.n,
        "counts": {name: hi - lo for name, (lo, hi) in b.blocks.items()},
        "F": {
            "size": f_size,
            "far_scale": far,
            "ring_radius": rho,
            "blue_anchor": [far, 0.0, 0.0],
            "white_anchor": [1.1 * far, 0.0, 0.0],
            "red_counterweight_depth": depth,
            "red_counterweight_count": n_counter,
            "mass_factor": params.mass_factor,
        },
    }
    return AdversarialSet(ts, manifest, dict(b.blocks))


@dataclass(frozen=True)
class VoronoiParams:
    n: int
    d: int
    c: int
    sites: int
    seed: int = 0

    def __post_init__(self):
        if self.c < 2 or self.n < self.c:
            raise InvalidInputError("need n >= c >= 2")
        if self.sites < self.c:
            raise InvalidInputError("need at least one site per class")
        if self.d < 1:
            raise InvalidInputError("dimension must be positive")

    @property
    def name(self) -> str:
        return f"v-{self.n}-{self.d}-{self.c}-{self.sites}"


def _nearest_site(points: np.ndarray, sites: np.ndarray) -> np.ndarray:
    out = np.empty(points.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // sites.shape[0])
    for lo in range(0, points.shape[0], step):
        out[lo:lo + step] = np.argmin(sq_dist_block(points[lo:lo + step], sites), axis=1)
    return out


def gen_voronoi(params: VoronoiParams) -> TrainingSet:
    """Uniform points in [0,1]^d labeled by the class of the nearest site (site k has class k mod c)."""
    seed = params.seed
    while True:
        rng = np.random.default_rng(seed)
        sites = rng.random((params.sites, params.d))
        pts = rng.random((params.n, params.d))
        cls = _nearest_site(pts, sites) % params.c
        if np.unique(cls).size == params.c:
            break
        seed += 1
    return TrainingSet.from_labels(pts, [str(k) for k in cls])


def gen_gaussian_blobs(n: int = 10_000, c: int = 3, std: float = 0.32, seed: int = 0) -> TrainingSet:
    """Isotropic 2-D Gaussian blobs centered on the unit circle, classes interleaved by index."""
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(c) / c
    centers = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    cls = np.arange(n) % c
    pts = centers[cls] + std * rng.standard_normal((n, 2))
    return TrainingSet.from_labels(pts, [str(k) for k in cls])
