"""Scenario geometry, fading channel generation, and effective channels.

All powers and gains are linear (watts / dimensionless); dBm and dB are
accepted only when reading a scenario file. Complex coefficients are
double-precision throughout. Channel draws are reproducible: one seed
sequence per link, spawned from the scenario seed in the fixed order
listed in ``_LINK_STREAMS``.
"""

import dataclasses
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

# Unit-modulus tolerance for reflection coefficients.
UNIT_MODULUS_TOL = 1e-12

# Order in which per-link RNG streams are spawned from the scenario seed.
# Streams 0-4 are always consumed; 5-8 only when twin_mode is off.
_LINK_STREAMS = (
    "user1_to_ap",        # 0
    "user2_to_ap",        # 1
    "user1_to_irs_cent",  # 2
    "user2_to_irs_cent",  # 3
    "irs_cent_to_ap",     # 4
    "user1_to_irs_dist",  # 5
    "user2_to_irs_dist",  # 6
    "irs_dist1_to_ap",    # 7
    "irs_dist2_to_ap",    # 8
)

Vec3 = tuple[float, float, float]


class Deployment(Enum):
    DISTRIBUTED = "distributed"
    CENTRALIZED = "centralized"


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario parameters: element counts, powers, geometry, fading seed.

    Defaults: 30 elements split evenly, 1 W per user, -90 dBm noise, users
    500 m either side of the AP, surfaces 1 m above their anchor nodes,
    reference path gain -30 dB with exponent 3, twin-coupled fading.
    """

    m_total: int = 30
    m_split: tuple[int, int] = (15, 15)
    p_max: tuple[float, float] = (1.0, 1.0)       # W
    noise_power: float = 1e-12                    # W
    ap_position: Vec3 = (0.0, 0.0, 1.0)           # m
    user_positions: tuple[Vec3, Vec3] = ((500.0, 0.0, 1.0), (-500.0, 0.0, 1.0))
    irs_positions_distributed: tuple[Vec3, Vec3] = ((500.0, 0.0, 2.0), (-500.0, 0.0, 2.0))
    irs_position_centralized: Vec3 = (0.0, 0.0, 2.0)
    pathloss_ref: float = 1e-3                    # linear gain at 1 m
    pathloss_exponent: float = 3.0
    direct_links_enabled: bool = True
    twin_mode: bool = True
    rng_seed: int = 0

    def validate(self) -> None:
        m1, m2 = self.m_split
        if self.m_total < 0 or m1 < 0 or m2 < 0:
            raise ValueError("element counts must be nonnegative")
        if m1 + m2 != self.m_total:
            raise ValueError(f"m_split {self.m_split} must sum to m_total {self.m_total}")
        if min(self.p_max) <= 0.0:
            raise ValueError(f"transmit powers must be positive, got {self.p_max}")
        if self.noise_power <= 0.0:
            raise ValueError(f"noise power must be positive, got {self.noise_power}")
        if self.pathloss_ref <= 0.0:
            raise ValueError(f"pathloss_ref must be positive, got {self.pathloss_ref}")
        if self.pathloss_exponent < 0.0:
            raise ValueError(f"pathloss_exponent must be >= 0, got {self.pathloss_exponent}")

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ChannelRealization:
    """All channel coefficients of one fading draw, for both deployments.

    h_bar:   (2,) direct user->AP coefficients
    h_dist:  per-user user->own-surface vectors, lengths (M1, M2)
    g_dist:  per-user own-surface->AP vectors, lengths (M1, M2)
    h_cent:  (2, M) user->centralized-surface vectors
    g_cent:  (M,) centralized-surface->AP vector
    """

    h_bar: np.ndarray
    h_dist: tuple[np.ndarray, np.ndarray]
    g_dist: tuple[np.ndarray, np.ndarray]
    h_cent: np.ndarray
    g_cent: np.ndarray

    @property
    def m_total(self) -> int:
        return int(self.g_cent.shape[0])

    @property
    def m_split(self) -> tuple[int, int]:
        return (int(self.h_dist[0].shape[0]), int(self.h_dist[1].shape[0]))

    def to_json_dict(self) -> dict:
        return {
            "h_bar": _complex_to_pairs(self.h_bar),
            "h_dist": [_complex_to_pairs(v) for v in self.h_dist],
            "g_dist": [_complex_to_pairs(v) for v in self.g_dist],
            "h_cent": [_complex_to_pairs(v) for v in self.h_cent],
            "g_cent": _complex_to_pairs(self.g_cent),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ChannelRealization":
        return cls(
            h_bar=_pairs_to_complex(d["h_bar"]),
            h_dist=tuple(_pairs_to_complex(v) for v in d["h_dist"]),
            g_dist=tuple(_pairs_to_complex(v) for v in d["g_dist"]),
            h_cent=np.stack([_pairs_to_complex(v) for v in d["h_cent"]]),
            g_cent=_pairs_to_complex(d["g_cent"]),
        )


@dataclass(frozen=True)
class ReflectionConfig:
    """Unit-modulus reflection coefficients for one deployment.

    ``phases`` holds one length-M vector (centralized) or two vectors of
    lengths (M1, M2) (distributed); every entry has modulus 1 within
    UNIT_MODULUS_TOL.
    """

    deployment: Deployment
    phases: tuple[np.ndarray, ...]

    def __post_init__(self):
        n_expected = 1 if self.deployment is Deployment.CENTRALIZED else 2
        if len(self.phases) != n_expected:
            raise ValueError(
                f"{self.deployment.value} reflection needs {n_expected} phase "
                f"vector(s), got {len(self.phases)}")
        for vec in self.phases:
            if vec.size and np.max(np.abs(np.abs(vec) - 1.0)) > UNIT_MODULUS_TOL:
                raise ValueError("reflection coefficients must have unit modulus")

    @classmethod
    def centralized(cls, vec: np.ndarray) -> "ReflectionConfig":
        return cls(Deployment.CENTRALIZED, (np.asarray(vec, dtype=np.complex128),))

    @classmethod
    def distributed(cls, vec1: np.ndarray, vec2: np.ndarray) -> "ReflectionConfig":
        return cls(Deployment.DISTRIBUTED,
                   (np.asarray(vec1, dtype=np.complex128),
                    np.asarray(vec2, dtype=np.complex128)))


def _complex_to_pairs(vec) -> list:
    return [[float(np.real(z)), float(np.imag(z))] for z in np.atleast_1d(vec)]


def _pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(re_, im_) for re_, im_ in pairs], dtype=np.complex128)


def path_loss(distance: float, gamma0: float, alpha_bar: float) -> float:
    """Distance-based power gain gamma0 * (1/d)^alpha_bar."""
    if distance <= 0.0:
        raise ValueError(f"link distance must be positive, got {distance}")
    return gamma0 * distance ** (-alpha_bar)


def _distance(a: Vec3, b: Vec3) -> float:
    return math.dist(a, b)


def _cscg(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """n i.i.d. circularly-symmetric complex Gaussian draws of given variance."""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _link_rngs(seed: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(_LINK_STREAMS))
    return [np.random.default_rng(c) for c in children]


def generate_realization(cfg: ScenarioConfig) -> ChannelRealization:
    """Draw one fading realization, deterministically from cfg.rng_seed.

    Every coefficient is i.i.d. CSCG with variance equal to the path loss of
    its link. In twin mode the centralized vectors are drawn and the
    distributed vectors are the shared slices (user k's serving-surface
    uplink reappears inside the centralized surface->AP vector, and its
    surface->AP link inside the centralized user-k vector), so both
    deployments see identical coefficients on the shared links.
    """
    cfg.validate()
    m1, m2 = cfg.m_split
    pl = lambda a, b: path_loss(_distance(a, b), cfg.pathloss_ref, cfg.pathloss_exponent)
    rngs = _link_rngs(cfg.rng_seed)

    h_bar = np.zeros(2, dtype=np.complex128)
    if cfg.direct_links_enabled:
        for k in (0, 1):
            h_bar[k] = _cscg(rngs[k], 1, pl(cfg.user_positions[k], cfg.ap_position))[0]

    h_cent = np.stack([
        _cscg(rngs[2 + k], cfg.m_total,
              pl(cfg.user_positions[k], cfg.irs_position_centralized))
        for k in (0, 1)
    ])
    g_cent = _cscg(rngs[4], cfg.m_total, pl(cfg.irs_position_centralized, cfg.ap_position))

    if cfg.twin_mode:
        h_dist = (g_cent[:m1].copy(), g_cent[m1:].copy())
        g_dist = (h_cent[0, :m1].copy(), h_cent[1, m1:].copy())
    else:
        h_dist = tuple(
            _cscg(rngs[5 + k], cfg.m_split[k],
                  pl(cfg.user_positions[k], cfg.irs_positions_distributed[k]))
            for k in (0, 1))
        g_dist = tuple(
            _cscg(rngs[7 + k], cfg.m_split[k],
                  pl(cfg.irs_positions_distributed[k], cfg.ap_position))
            for k in (0, 1))

    return ChannelRealization(h_bar=h_bar, h_dist=h_dist, g_dist=g_dist,
                              h_cent=h_cent, g_cent=g_cent)


def generate_batch(cfg: ScenarioConfig, count: int) -> list[ChannelRealization]:
    """Independent draws with per-draw derived seeds (safe to parallelize)."""
    return [generate_realization(cfg.replace(rng_seed=s))
            for s in derived_seeds(cfg.rng_seed, count)]


def derived_seeds(base_seed: int, count: int) -> list[int]:
    """Deterministic child seeds: draw i uses SeedSequence((base_seed, i))."""
    return [int(np.random.SeedSequence((base_seed, i)).generate_state(1)[0])
            for i in range(count)]


def twin_channels(h_dist: tuple[np.ndarray, np.ndarray],
                  g_dist: tuple[np.ndarray, np.ndarray],
                  cross_variances: tuple[float, float],
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Build the centralized counterpart (g_cent, h_cent) of distributed links.

    The centralized surface->AP vector is the concatenation of the two
    user->surface vectors, and each user's centralized vector contains its
    distributed surface->AP vector on its own element block. The remaining
    cross entries (user k to the other user's element block) are free and
    drawn CSCG with the supplied per-user variances.
    """
    h1, h2 = (np.asarray(v, dtype=np.complex128) for v in h_dist)
    g1, g2 = (np.asarray(v, dtype=np.complex128) for v in g_dist)
    if h1.shape != g1.shape or h2.shape != g2.shape:
        raise ValueError("distributed channel vectors must have matching lengths")
    m1, m2 = h1.shape[0], h2.shape[0]
    g_cent = np.concatenate([h1, h2])
    h_cent = np.zeros((2, m1 + m2), dtype=np.complex128)
    h_cent[0, :m1] = g1
    h_cent[1, m1:] = g2
    h_cent[0, m1:] = _cscg(rng, m2, cross_variances[0])
    h_cent[1, :m1] = _cscg(rng, m1, cross_variances[1])
    return g_cent, h_cent


def satisfies_twin_equalities(real: ChannelRealization) -> bool:
    """Check the shared-coefficient equalities between the two deployments."""
    m1, _ = real.m_split
    return (np.array_equal(real.g_cent[:m1], real.h_dist[0])
            and np.array_equal(real.g_cent[m1:], real.h_dist[1])
            and np.array_equal(real.h_cent[0, :m1], real.g_dist[0])
            and np.array_equal(real.h_cent[1, m1:], real.g_dist[1]))


def effective_channel(real: ChannelRealization, refl: ReflectionConfig,
                      user: int) -> complex:
    """Effective user->AP coefficient: direct link plus reflected cascade.

    Distributed: h_bar_k + sum_m g_km phi_km h_km over the user's own surface.
    Centralized: h_bar_k + sum_m g_m phi_m h_km over all M elements.
    """
    if user not in (0, 1):
        raise IndexError(f"user index must be 0 or 1, got {user}")
    if refl.deployment is Deployment.DISTRIBUTED:
        phi = refl.phases[user]
        cascade = np.sum(real.g_dist[user] * phi * real.h_dist[user])
    else:
        phi = refl.phases[0]
        cascade = np.sum(real.g_cent * phi * real.h_cent[user])
    return complex(real.h_bar[user] + cascade)


def gain_upper_bound(real: ChannelRealization, deployment: Deployment,
                     user: int) -> float:
    """Largest achievable effective amplitude: |h_bar_k| + sum_m |g_m h_km|."""
    if deployment is Deployment.DISTRIBUTED:
        cascade = np.sum(np.abs(real.g_dist[user] * real.h_dist[user]))
    else:
        cascade = np.sum(np.abs(real.g_cent * real.h_cent[user]))
    return float(np.abs(real.h_bar[user]) + cascade)


def _alignment_vector(h_bar_k: complex, cascade: np.ndarray) -> np.ndarray:
    """Phases rotating every cascaded term onto the direct link's phase.

    arg{0} is taken as 0, and elements whose cascaded coefficient vanishes
    get phase 1 (they contribute nothing).
    """
    phi = np.exp(1j * (np.angle(h_bar_k) - np.angle(cascade)))
    phi[cascade == 0] = 1.0
    return phi


def aligned_phases(real: ChannelRealization, deployment: Deployment,
                   user: int | None = None) -> ReflectionConfig:
    """Phase configuration maximizing one user's effective gain.

    Distributed: each surface aligns its own user (maximizes both at once).
    Centralized: all elements align the requested user.
    """
    if deployment is Deployment.DISTRIBUTED:
        vecs = [_alignment_vector(complex(real.h_bar[k]),
                                  real.g_dist[k] * real.h_dist[k])
                for k in (0, 1)]
        return ReflectionConfig.distributed(vecs[0], vecs[1])
    if user not in (0, 1):
        raise IndexError("centralized alignment needs a user index 0 or 1")
    vec = _alignment_vector(complex(real.h_bar[user]),
                            real.g_cent * real.h_cent[user])
    return ReflectionConfig.centralized(vec)


# --- scenario file -----------------------------------------------------------
#
# Flat "key = value" lines, keys named exactly as the ScenarioConfig fields.
# Power-like values accept a dBm/dB suffix; positions are comma-separated
# triples, with ";" between the two entries of a pair.

_UNIT_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(dBm|dB|W)?\s*$")


def _parse_scalar(token: str) -> float:
    m = _UNIT_RE.match(token)
    if not m:
        raise ValueError(f"cannot parse value {token!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if unit == "dBm":
        return 10.0 ** ((value - 30.0) / 10.0)
    if unit == "dB":
        return 10.0 ** (value / 10.0)
    return value


def _parse_vec3(token: str) -> Vec3:
    parts = [float(p) for p in token.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 3 coordinates, got {token!r}")
    return tuple(parts)


def _parse_vec3_pair(token: str) -> tuple[Vec3, Vec3]:
    parts = token.split(";")
    if len(parts) != 2:
        raise ValueError(f"expected two ';'-separated positions, got {token!r}")
    return (_parse_vec3(parts[0]), _parse_vec3(parts[1]))


def _parse_bool(token: str) -> bool:
    t = token.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"cannot parse boolean {token!r}")


_FIELD_PARSERS = {
    "m_total": lambda t: int(t),
    "m_split": lambda t: tuple(int(p) for p in t.split(",")),
    "p_max": lambda t: tuple(_parse_scalar(p) for p in t.split(",")),
    "noise_power": _parse_scalar,
    "ap_position": _parse_vec3,
    "user_positions": _parse_vec3_pair,
    "irs_positions_distributed": _parse_vec3_pair,
    "irs_position_centralized": _parse_vec3,
    "pathloss_ref": _parse_scalar,
    "pathloss_exponent": lambda t: float(t),
    "direct_links_enabled": _parse_bool,
    "twin_mode": _parse_bool,
    "rng_seed": lambda t: int(t),
}


def load_scenario_config(path) -> ScenarioConfig:
    """Read a scenario file; unspecified keys keep their defaults."""
    text = Path(path).read_text()
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            overrides[key] = _FIELD_PARSERS[key](value.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    cfg = ScenarioConfig(**overrides)
    cfg.validate()
    return cfg


def scenario_to_file_text(cfg: ScenarioConfig) -> str:
    """Render a config in the scenario-file format (round-trips with load)."""
    fmt3 = lambda v: ", ".join(repr(float(x)) for x in v)
    lines = [
        f"m_total = {cfg.m_total}",
        f"m_split = {cfg.m_split[0]}, {cfg.m_split[1]}",
        f"p_max = {cfg.p_max[0]!r}, {cfg.p_max[1]!r}",
        f"noise_power = {cfg.noise_power!r}",
        f"ap_position = {fmt3(cfg.ap_position)}",
        f"user_positions = {fmt3(cfg.user_positions[0])} ; {fmt3(cfg.user_positions[1])}",
        "irs_positions_distributed = "
        f"{fmt3(cfg.irs_positions_distributed[0])} ; {fmt3(cfg.irs_positions_distributed[1])}",
        f"irs_position_centralized = {fmt3(cfg.irs_position_centralized)}",
        f"pathloss_ref = {cfg.pathloss_ref!r}",
        f"pathloss_exponent = {cfg.pathloss_exponent!r}",
        f"direct_links_enabled = {str(cfg.direct_links_enabled).lower()}",
        f"twin_mode = {str(cfg.twin_mode).lower()}",
        f"rng_seed = {cfg.rng_seed}",
    ]
    return "\n".join(lines) + "\n"
