"""Dominance radii, per-user dominance predicates, and user pairing.

The closed-form radii split a cell into a "strong" inner region and a
"weak" outer region: a two-user cluster beats the TDMA baseline for
both members exactly when the near user sits strictly inside the radius
and the far user strictly beyond it (downlink), or when the far user is
beyond a radius that depends on the near user's link (uplink, where the
far user always gains).  A plain bisection root finder on the rate gap
is provided as an independent cross-check of the closed forms.

Distances exactly on a radius give equal NOMA and OMA rates, which
counts as not dominant.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .link_model import UserTerminal


@dataclass(frozen=True)
class DlThresholdInput:
    """Parameters fixing the downlink dominance radius.

    ``a1`` is the power fraction of the strong user; it must stay below
    0.5, otherwise no distance gives the weak user a NOMA gain.  ``p``
    is the transmit power normalized by the noise PSD.
    """

    a1: float
    p: float
    alpha: float = 4.0

    def __post_init__(self):
        if self.a1 <= 0:
            raise ValueError(f"a1 must be positive, got {self.a1}")
        if self.a1 >= 0.5:
            raise ValueError(
                f"infeasible power fraction a1={self.a1}: the strong user "
                "must get less than half the power budget"
            )
        if self.p <= 0:
            raise ValueError(f"normalized power must be positive, got {self.p}")
        if self.alpha <= 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.alpha}")


@dataclass(frozen=True)
class UlPairingConfig:
    """Uplink pairing parameters; tx powers come from the candidates."""

    noise_psd_w_per_hz: float
    alpha: float = 4.0

    def __post_init__(self):
        if self.noise_psd_w_per_hz <= 0:
            raise ValueError(
                f"noise PSD must be positive, got {self.noise_psd_w_per_hz}"
            )
        if self.alpha <= 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.alpha}")


@dataclass(frozen=True)
class PairDecision:
    strong: UserTerminal
    weak: UserTerminal
    threshold_m: float
    feasible: bool
    mode: str  # "proposed" or "random"


@dataclass(frozen=True)
class PairSelection:
    """Pairs plus the users no pair could be formed for."""

    pairs: tuple[PairDecision, ...]
    singletons: tuple[UserTerminal, ...]
    mode: str


def dl_threshold(inp: DlThresholdInput) -> float:
    """Downlink dominance radius in meters."""
    return (inp.p * inp.a1 ** 2 / (1.0 - 2.0 * inp.a1)) ** (1.0 / inp.alpha)


def ul_threshold(d1_m: float, p1: float, p2: float, alpha: float = 4.0) -> float:
    """Minimum far-user distance for the near uplink user to gain.

    ``p1`` and ``p2`` are the near and far users' normalized powers.
    The radius r satisfies p2 * r**-alpha = sqrt(1 + p1 * d1**-alpha):
    the far user's received power must drop below the level at which
    decoding the near user first stops costing it half its log rate.
    """
    for name, value in (("d1_m", d1_m), ("p1", p1), ("p2", p2), ("alpha", alpha)):
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value}")
    return (math.sqrt(1.0 + p1 * d1_m ** -alpha) / p2) ** (-1.0 / alpha)


def dl_dominant(d1_m: float, d2_m: float, inp: DlThresholdInput) -> tuple[bool, bool]:
    """(strong_ok, weak_ok): near user strictly inside the radius, far user strictly beyond."""
    if d1_m >= d2_m:
        raise ValueError(f"expected d1 < d2, got d1={d1_m} and d2={d2_m}")
    radius = dl_threshold(inp)
    return d1_m < radius, d2_m > radius


def ul_dominant(
    d1_m: float, d2_m: float, p1: float, p2: float, alpha: float = 4.0
) -> tuple[bool, bool]:
    """(strong_ok, weak_ok) for an uplink pair.

    The far user is decoded last and sees no intra-cluster interference,
    so it always gains; the near user gains iff the far user sits beyond
    the distance-dependent radius.
    """
    if d1_m >= d2_m:
        raise ValueError(f"expected d1 < d2, got d1={d1_m} and d2={d2_m}")
    return d2_m > ul_threshold(d1_m, p1, p2, alpha), True


def _evaluate_pair(
    strong: UserTerminal,
    weak: UserTerminal,
    config: DlThresholdInput | UlPairingConfig,
) -> tuple[float, bool]:
    """Threshold radius for this pair and whether both members gain."""
    if isinstance(config, DlThresholdInput):
        radius = dl_threshold(config)
    elif isinstance(config, UlPairingConfig):
        if strong.tx_power_w is None or weak.tx_power_w is None:
            raise ValueError("uplink pairing candidates need tx powers")
        radius = ul_threshold(
            strong.distance_m,
            strong.tx_power_w / config.noise_psd_w_per_hz,
            weak.tx_power_w / config.noise_psd_w_per_hz,
            config.alpha,
        )
    else:
        raise TypeError(
            f"expected DlThresholdInput or UlPairingConfig, got {type(config).__name__}"
        )
    if not strong.distance_m < weak.distance_m:
        return radius, False
    if isinstance(config, DlThresholdInput):
        ok = strong.distance_m < radius and weak.distance_m > radius
    else:
        ok = weak.distance_m > radius
    return radius, ok


def select_pairs(
    candidates: Sequence[UserTerminal],
    config: DlThresholdInput | UlPairingConfig,
    mode: str = "proposed",
    seed: int | np.random.Generator | None = None,
) -> PairSelection:
    """Form two-user clusters from a candidate pool.

    Proposed mode greedily pairs the nearest remaining strong-side user
    with the farthest remaining weak-side user and emits only pairs for
    which both dominance predicates hold; it stops at the first
    infeasible nearest/farthest combination (a heuristic, not an optimal
    matching).  Random mode shuffles the pool with the seeded generator,
    pairs consecutive users, labels the nearer one strong, and emits
    every pair with its feasibility flag.  Leftover users come back as
    singletons.
    """
    pool = list(candidates)
    if len(pool) < 2:
        raise ValueError(f"need at least 2 candidates, got {len(pool)}")
    if mode == "proposed":
        ordered = sorted(pool, key=lambda u: (u.distance_m, u.id))
        pairs = []
        i, j = 0, len(ordered) - 1
        while i < j:
            radius, ok = _evaluate_pair(ordered[i], ordered[j], config)
            if not ok:
                break
            pairs.append(PairDecision(ordered[i], ordered[j], radius, True, mode))
            i += 1
            j -= 1
        return PairSelection(tuple(pairs), tuple(ordered[i : j + 1]), mode)
    if mode == "random":
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(pool))
        pairs = []
        for k in range(0, len(pool) - 1, 2):
            first, second = pool[order[k]], pool[order[k + 1]]
            if second.distance_m < first.distance_m:
                first, second = second, first
            radius, ok = _evaluate_pair(first, second, config)
            pairs.append(PairDecision(first, second, radius, ok, mode))
        singles = (pool[order[-1]],) if len(pool) % 2 else ()
        return PairSelection(tuple(pairs), singles, mode)
    raise ValueError(f"unknown pairing mode {mode!r}")


def threshold_oracle(
    rate_gap: Callable[[float], float],
    lo_m: float,
    hi_m: float,
    tol_m: float = 1e-6,
) -> float:
    """Bisection root of ``rate_gap`` on [lo_m, hi_m].

    Used to cross-check the closed-form radii against the rate engine;
    the gap must change sign over the bracket.  Takes at most
    ceil(log2((hi - lo) / tol)) halvings.
    """
    if not lo_m < hi_m:
        raise ValueError(f"bad bracket: lo={lo_m} must be below hi={hi_m}")
    if tol_m <= 0:
        raise ValueError(f"tolerance must be positive, got {tol_m}")
    gap_lo = rate_gap(lo_m)
    gap_hi = rate_gap(hi_m)
    if gap_lo == 0.0:
        return lo_m
    if gap_hi == 0.0:
        return hi_m
    if (gap_lo > 0) == (gap_hi > 0):
        raise ValueError(f"rate gap does not change sign on [{lo_m}, {hi_m}]")
    while hi_m - lo_m > tol_m:
        mid = 0.5 * (lo_m + hi_m)
        gap_mid = rate_gap(mid)
        if gap_mid == 0.0:
            return mid
        if (gap_mid > 0) == (gap_lo > 0):
            lo_m, gap_lo = mid, gap_mid
        else:
            hi_m = mid
    return 0.5 * (lo_m + hi_m)
