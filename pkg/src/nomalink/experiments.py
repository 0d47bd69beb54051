"""Distance sweeps and Monte-Carlo selection experiments.

Sweeps move one user of a two-user cluster along a distance grid and
record NOMA/OMA rates, dominance flags and the threshold radius per
grid point, reporting the grid point where the swept user's dominance
flag first flips.  The Monte-Carlo runner drops two users uniformly
(by area) into an annulus, forms the cluster once under the proposed
selection criterion and once under random selection, and tallies how
often each user actually beats its OMA rate under each mode.
"""

import math
from dataclasses import dataclass

import numpy as np

from .link_model import PathLoss, PowerBudget, UserTerminal, normalized_power
from .pairing import DlThresholdInput, UlPairingConfig, dl_threshold, select_pairs, ul_threshold
from .rate_engine import PERFECT_SIC, DlCluster, RateReport, SicModel, UlCluster, rate_report

_GRID_SLACK = 1e-9  # relative, absorbs float accumulation at the top of a grid


@dataclass(frozen=True)
class DlScenario:
    """Two-user downlink setting: strong-user power fraction plus link budget."""

    a1: float
    budget: PowerBudget
    pl: PathLoss = PathLoss(4.0)

    def __post_init__(self):
        self.threshold_input()  # validates a1 against the feasibility bound

    def threshold_input(self) -> DlThresholdInput:
        return DlThresholdInput(self.a1, normalized_power(self.budget), self.pl.alpha)

    def cluster(self, d1_m: float, d2_m: float) -> DlCluster:
        users = (UserTerminal("u1", d1_m), UserTerminal("u2", d2_m))
        return DlCluster(users, (self.a1, 1.0 - self.a1), self.budget, self.pl)

    def pairing_config(self) -> DlThresholdInput:
        return self.threshold_input()

    def threshold_m(self, d1_m: float) -> float:
        # the downlink radius does not depend on the pair's distances
        return dl_threshold(self.threshold_input())


@dataclass(frozen=True)
class UlScenario:
    """Two-user uplink setting: near/far user tx powers plus noise density."""

    p1_w: float
    p2_w: float
    noise_psd_w_per_hz: float
    pl: PathLoss = PathLoss(4.0)

    def __post_init__(self):
        for name, value in (
            ("p1_w", self.p1_w),
            ("p2_w", self.p2_w),
            ("noise_psd_w_per_hz", self.noise_psd_w_per_hz),
        ):
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def cluster(self, d1_m: float, d2_m: float) -> UlCluster:
        users = (
            UserTerminal("u1", d1_m, self.p1_w),
            UserTerminal("u2", d2_m, self.p2_w),
        )
        return UlCluster(users, self.noise_psd_w_per_hz, self.pl)

    def pairing_config(self) -> UlPairingConfig:
        return UlPairingConfig(self.noise_psd_w_per_hz, self.pl.alpha)

    def threshold_m(self, d1_m: float) -> float:
        n0 = self.noise_psd_w_per_hz
        return ul_threshold(d1_m, self.p1_w / n0, self.p2_w / n0, self.pl.alpha)


@dataclass(frozen=True)
class SweepSpec:
    """One distance sweep: which user stays put, grid for the other one."""

    direction: str  # "downlink" or "uplink"
    fixed_user: str  # "d1" or "d2"
    fixed_distance_m: float
    lo_m: float
    hi_m: float
    step_m: float
    scenario: DlScenario | UlScenario
    sic: SicModel = PERFECT_SIC

    def __post_init__(self):
        if self.direction not in ("downlink", "uplink"):
            raise ValueError(f"direction must be downlink or uplink, got {self.direction!r}")
        expected = DlScenario if self.direction == "downlink" else UlScenario
        if not isinstance(self.scenario, expected):
            raise ValueError(f"{self.direction} sweep needs a {expected.__name__}")
        if self.fixed_user not in ("d1", "d2"):
            raise ValueError(f"fixed_user must be d1 or d2, got {self.fixed_user!r}")
        if self.fixed_distance_m <= 0:
            raise ValueError(f"fixed distance must be positive, got {self.fixed_distance_m}")
        if self.lo_m <= 0:
            raise ValueError(f"sweep start must be positive, got {self.lo_m}")
        if not self.lo_m < self.hi_m:
            raise ValueError(f"sweep range is empty: lo={self.lo_m}, hi={self.hi_m}")
        if self.step_m <= 0:
            raise ValueError(f"sweep step must be positive, got {self.step_m}")


@dataclass(frozen=True)
class SweepRecord:
    swept_distance_m: float
    noma_rate_u1: float
    oma_rate_u1: float
    noma_rate_u2: float
    oma_rate_u2: float
    dominant_u1: bool
    dominant_u2: bool
    threshold_m: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: tuple[SweepRecord, ...]
    crossover_m: float | None  # first grid point where the swept user's flag flips
    skipped_rows: int  # grid points dropped for violating d1 < d2


def _grid(lo: float, hi: float, step: float) -> list[float]:
    count = int(math.floor((hi - lo) / step * (1.0 + _GRID_SLACK))) + 1
    return [lo + k * step for k in range(count)]


def run_sweep(spec: SweepSpec) -> SweepResult:
    grid = _grid(spec.lo_m, spec.hi_m, spec.step_m)
    if not grid:
        raise ValueError("sweep grid is empty")
    records = []
    skipped = 0
    for swept in grid:
        if spec.fixed_user == "d1":
            d1, d2 = spec.fixed_distance_m, swept
        else:
            d1, d2 = swept, spec.fixed_distance_m
        if not d1 < d2:
            skipped += 1
            continue
        report = rate_report(spec.scenario.cluster(d1, d2), spec.sic)
        u1, u2 = report.entries
        records.append(
            SweepRecord(
                swept_distance_m=swept,
                noma_rate_u1=u1.noma_rate,
                oma_rate_u1=u1.oma_rate,
                noma_rate_u2=u2.noma_rate,
                oma_rate_u2=u2.oma_rate,
                dominant_u1=u1.noma_dominant,
                dominant_u2=u2.noma_dominant,
                threshold_m=spec.scenario.threshold_m(d1),
            )
        )
    swept_flag = "dominant_u2" if spec.fixed_user == "d1" else "dominant_u1"
    crossover = None
    if records:
        first = getattr(records[0], swept_flag)
        for rec in records:
            if getattr(rec, swept_flag) != first:
                crossover = rec.swept_distance_m
                break
    return SweepResult(spec, tuple(records), crossover, skipped)


@dataclass(frozen=True)
class MonteCarloSpec:
    """Random two-user drops in an annulus, uniform by area."""

    trials: int
    r_min_m: float
    r_max_m: float
    scenario: DlScenario | UlScenario
    seed: int = 0
    sic: SicModel = PERFECT_SIC

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.r_min_m <= 0:
            raise ValueError(f"r_min must be positive, got {self.r_min_m}")
        if not self.r_min_m < self.r_max_m:
            raise ValueError(
                f"degenerate annulus: r_min={self.r_min_m}, r_max={self.r_max_m}"
            )


@dataclass(frozen=True)
class ModeStats:
    """Tallies for one selection mode; means are None when no pair formed."""

    pairs_formed: int
    dominance_fraction_u1: float | None
    dominance_fraction_u2: float | None
    mean_noma_rate_u1: float | None
    mean_oma_rate_u1: float | None
    mean_noma_rate_u2: float | None
    mean_oma_rate_u2: float | None
    mean_noma_sum_rate: float | None
    mean_oma_sum_rate: float | None


@dataclass(frozen=True)
class MonteCarloSummary:
    direction: str
    trials: int
    r_min_m: float
    r_max_m: float
    seed: int
    feasibility_rate: float  # share of draws the proposed criterion admits
    proposed: ModeStats
    random: ModeStats
    placement: str = "uniform-area annulus"
    # random selection re-pairs the same drawn positions; only the
    # positions themselves are random
    pairing_note: str = "random mode pairs the drawn positions regardless of the criterion"


class _Tally:
    def __init__(self):
        self.pairs = 0
        self.dominant = [0, 0]
        self.noma = [0.0, 0.0]
        self.oma = [0.0, 0.0]
        self.noma_sum = 0.0
        self.oma_sum = 0.0

    def add(self, report: RateReport) -> None:
        self.pairs += 1
        for k, entry in enumerate(report.entries):
            self.dominant[k] += entry.noma_dominant
            self.noma[k] += entry.noma_rate
            self.oma[k] += entry.oma_rate
        self.noma_sum += report.noma_sum_rate
        self.oma_sum += report.oma_sum_rate

    def stats(self) -> ModeStats:
        if self.pairs == 0:
            return ModeStats(0, None, None, None, None, None, None, None, None)
        n = self.pairs
        return ModeStats(
            pairs_formed=n,
            dominance_fraction_u1=self.dominant[0] / n,
            dominance_fraction_u2=self.dominant[1] / n,
            mean_noma_rate_u1=self.noma[0] / n,
            mean_oma_rate_u1=self.oma[0] / n,
            mean_noma_rate_u2=self.noma[1] / n,
            mean_oma_rate_u2=self.oma[1] / n,
            mean_noma_sum_rate=self.noma_sum / n,
            mean_oma_sum_rate=self.oma_sum / n,
        )


def run_monte_carlo(spec: MonteCarloSpec) -> MonteCarloSummary:
    """Compare proposed-criterion and random selection over random drops.

    Each trial draws two positions; the proposed decision keeps the pair
    only when both dominance predicates hold, the random decision always
    keeps it.  Dominance is then re-checked from the actual rates, so
    with imperfect SIC even proposed-mode pairs can fall short.
    """
    rng = np.random.default_rng(spec.seed)
    config = spec.scenario.pairing_config()
    direction = "downlink" if isinstance(spec.scenario, DlScenario) else "uplink"
    proposed = _Tally()
    randomly = _Tally()
    feasible = 0
    for _ in range(spec.trials):
        radii = np.sqrt(rng.uniform(spec.r_min_m ** 2, spec.r_max_m ** 2, size=2))
        d1, d2 = float(radii.min()), float(radii.max())
        if not d1 < d2:  # coincident draw, no valid cluster
            continue
        cluster = spec.scenario.cluster(d1, d2)
        report = rate_report(cluster, spec.sic)
        if select_pairs(cluster.users, config, "proposed").pairs:
            feasible += 1
            proposed.add(report)
        selection = select_pairs(cluster.users, config, "random", rng)
        if selection.pairs:
            randomly.add(report)
    return MonteCarloSummary(
        direction=direction,
        trials=spec.trials,
        r_min_m=spec.r_min_m,
        r_max_m=spec.r_max_m,
        seed=spec.seed,
        feasibility_rate=feasible / spec.trials,
        proposed=proposed.stats(),
        random=randomly.stats(),
    )
