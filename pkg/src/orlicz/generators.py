"""Named family generators for scenario configs.

Every generator is deterministic given its parameters; the only randomized
one (scaled_ball) takes an explicit seed.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .modular import luxemburg_norm
from .phi import GeneralizedPhi
from .space import DiscreteMeasureSpace, FnFamily


def unit_vectors(space: DiscreteMeasureSpace, gp: GeneralizedPhi, count: int) -> FnFamily:
    """Indicators of the first `count` atoms."""
    count = int(count)
    if count < 1 or count > space.n_atoms:
        raise ConfigurationError(f"unit_vectors needs 1 <= count <= {space.n_atoms}")
    members = []
    for i in range(count):
        e = np.zeros(space.n_atoms)
        e[i] = 1.0
        members.append(e)
    return FnFamily(tuple(members), name=f"unit_vectors({count})")


def growing_peaks(space: DiscreteMeasureSpace, gp: GeneralizedPhi, count: int) -> FnFamily:
    """n times the indicator of atom n: supports escape while heights grow."""
    count = int(count)
    if count < 1 or count > space.n_atoms:
        raise ConfigurationError(f"growing_peaks needs 1 <= count <= {space.n_atoms}")
    members = []
    for i in range(count):
        e = np.zeros(space.n_atoms)
        e[i] = float(i + 1)
        members.append(e)
    return FnFamily(tuple(members), name=f"growing_peaks({count})")


def disjoint_bumps(
    space: DiscreteMeasureSpace, gp: GeneralizedPhi, count: int, width: float
) -> FnFamily:
    """Indicators of consecutive label intervals of the given width."""
    count = int(count)
    width = float(width)
    if count < 1 or width <= 0:
        raise ConfigurationError("disjoint_bumps needs count >= 1 and width > 0")
    start = float(space.labels[0])
    members = []
    for i in range(count):
        lo = start + i * width
        hi = lo + width
        mask = (space.labels >= lo) & (space.labels < hi)
        if not mask.any():
            raise ConfigurationError(
                f"disjoint_bumps block [{lo!r}, {hi!r}) contains no atom"
            )
        members.append(mask.astype(float))
    return FnFamily(tuple(members), name=f"disjoint_bumps({count}, {width})")


def escaping_bumps(
    space: DiscreteMeasureSpace,
    gp: GeneralizedPhi,
    count: int,
    width: float = 1.0,
    start: float = 1.0,
) -> FnFamily:
    """f_n(x) = x on [start + (n-1) width, start + n width), 0 elsewhere."""
    count = int(count)
    width = float(width)
    start = float(start)
    if count < 1 or width <= 0:
        raise ConfigurationError("escaping_bumps needs count >= 1 and width > 0")
    if start + count * width > float(space.labels[-1]) + 1e-12:
        raise ConfigurationError("escaping_bumps blocks run past the truncated domain")
    members = []
    for i in range(count):
        lo = start + i * width
        hi = lo + width
        mask = (space.labels >= lo) & (space.labels < hi)
        members.append(np.where(mask, space.labels, 0.0))
    return FnFamily(tuple(members), name=f"escaping_bumps({count}, {width})")


def scaled_ball(
    space: DiscreteMeasureSpace,
    gp: GeneralizedPhi,
    count: int,
    seed: int,
    scale: float = 1.0,
) -> FnFamily:
    """Seeded Gaussian draws rescaled into the unit modular ball.

    Each draw is divided by its Luxemburg norm, so its modular is at most 1;
    `scale` in (0, 1] shrinks the family further.
    """
    count = int(count)
    if count < 1:
        raise ConfigurationError("scaled_ball needs count >= 1")
    if not 0 < float(scale) <= 1.0:
        raise ConfigurationError("scaled_ball scale must lie in (0, 1]")
    rng = np.random.default_rng(int(seed))
    members = []
    for _ in range(count):
        draw = rng.standard_normal(space.n_atoms)
        if not np.any(draw):
            draw[0] = 1.0
        # divide by the certified bracket end, so the modular is provably <= 1
        radius = luxemburg_norm(gp, space, draw).bracket[1]
        members.append(float(scale) * draw / radius)
    return FnFamily(tuple(members), name=f"scaled_ball({count}, seed={seed})")


GENERATORS = {
    "unit_vectors": (unit_vectors, "unit_vectors(count)", "indicators of the first atoms"),
    "growing_peaks": (growing_peaks, "growing_peaks(count)", "n times the n-th unit vector"),
    "disjoint_bumps": (
        disjoint_bumps,
        "disjoint_bumps(count, width)",
        "indicator blocks of consecutive label intervals",
    ),
    "escaping_bumps": (
        escaping_bumps,
        "escaping_bumps(count, width=1.0, start=1.0)",
        "identity-height bumps on consecutive intervals",
    ),
    "scaled_ball": (
        scaled_ball,
        "scaled_ball(count, seed, scale=1.0)",
        "seeded Gaussian draws rescaled into the unit modular ball",
    ),
}


def list_generators() -> str:
    """Deterministic one-line-per-generator listing."""
    lines = []
    for name in sorted(GENERATORS):
        _, signature, description = GENERATORS[name]
        lines.append(f"{signature} - {description}")
    return "\n".join(lines)


def make_family(name: str, space, gp, params: dict) -> FnFamily:
    if name not in GENERATORS:
        raise ConfigurationError(f"unknown family generator {name!r}")
    fn = GENERATORS[name][0]
    try:
        return fn(space, gp, **params)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for generator {name!r}: {exc}") from exc
