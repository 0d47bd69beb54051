"""Command-line front end: flat JSON scenario configs in, CSV/JSON out.

Subcommands: ``threshold`` (print a dominance radius), ``rates`` (one
cluster's NOMA vs OMA report), ``sweep`` (distance sweep), ``monte-carlo``
(proposed vs random selection statistics), ``pair`` (pair a candidate
pool).  Every value in the config file can be overridden by a flag of
the same name.  CSV output carries the resolved config, seed and
package version as leading ``#`` comment lines; ``--no-timestamp``
suppresses the one non-reproducible line so runs with identical config
and seed are byte-identical.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from typing import Any, Iterable, Sequence

from . import __version__
from .link_model import PathLoss, PowerBudget, UserTerminal
from .pairing import (
    DlThresholdInput,
    PairSelection,
    UlPairingConfig,
    dl_threshold,
    select_pairs,
    ul_threshold,
)
from .rate_engine import RateReport, SicModel, rate_report
from .experiments import (
    DlScenario,
    MonteCarloSpec,
    MonteCarloSummary,
    SweepResult,
    SweepSpec,
    UlScenario,
    run_monte_carlo,
    run_sweep,
)

SWEEP_COLUMNS = (
    "swept_distance_m",
    "noma_rate_u1",
    "oma_rate_u1",
    "noma_rate_u2",
    "oma_rate_u2",
    "dominant_u1",
    "dominant_u2",
    "threshold_m",
)


class ConfigError(ValueError):
    """A scenario config is malformed, incomplete, or out of range."""


_STR_KEYS = {"direction", "swept_user", "mode", "candidates_m", "tx_powers_w", "output"}
_FLOAT_KEYS = {
    "d1_m",
    "d2_m",
    "a1",
    "total_power_w",
    "p1_w",
    "p2_w",
    "noise_psd_w_per_hz",
    "alpha",
    "beta",
    "sweep_lo_m",
    "sweep_hi_m",
    "sweep_step_m",
    "r_min_m",
    "r_max_m",
}
_INT_KEYS = {"trials", "seed"}
_POSITIVE_KEYS = (
    "d1_m",
    "d2_m",
    "total_power_w",
    "p1_w",
    "p2_w",
    "noise_psd_w_per_hz",
    "alpha",
    "sweep_lo_m",
    "sweep_hi_m",
    "sweep_step_m",
    "r_min_m",
    "r_max_m",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated flat scenario description shared by all subcommands."""

    direction: str
    d1_m: float | None = None
    d2_m: float | None = None
    a1: float | None = None
    total_power_w: float | None = None
    p1_w: float | None = None
    p2_w: float | None = None
    noise_psd_w_per_hz: float | None = None
    alpha: float = 4.0
    beta: float = 0.0
    swept_user: str | None = None
    sweep_lo_m: float | None = None
    sweep_hi_m: float | None = None
    sweep_step_m: float | None = None
    trials: int | None = None
    r_min_m: float | None = None
    r_max_m: float | None = None
    seed: int = 0
    candidates_m: str | None = None
    tx_powers_w: str | None = None
    mode: str | None = None
    output: str | None = None

    def __post_init__(self):
        if self.direction not in ("downlink", "uplink"):
            raise ConfigError(
                f"field 'direction': must be 'downlink' or 'uplink', got {self.direction!r}"
            )
        for key in _POSITIVE_KEYS:
            value = getattr(self, key)
            if value is not None and value <= 0:
                raise ConfigError(f"field {key!r}: must be positive, got {value}")
        if self.a1 is not None:
            if self.a1 <= 0:
                raise ConfigError(f"field 'a1': must be positive, got {self.a1}")
            if self.a1 >= 0.5:
                raise ConfigError(
                    f"field 'a1': infeasible power fraction {self.a1} (must be < 0.5)"
                )
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigError(f"field 'beta': must be in [0, 1], got {self.beta}")
        if self.swept_user is not None and self.swept_user not in ("d1", "d2"):
            raise ConfigError(
                f"field 'swept_user': must be 'd1' or 'd2', got {self.swept_user!r}"
            )
        if (
            self.sweep_lo_m is not None
            and self.sweep_hi_m is not None
            and not self.sweep_lo_m < self.sweep_hi_m
        ):
            raise ConfigError(
                f"field 'sweep_hi_m': must exceed sweep_lo_m={self.sweep_lo_m}, "
                f"got {self.sweep_hi_m}"
            )
        if self.trials is not None and self.trials < 1:
            raise ConfigError(f"field 'trials': must be at least 1, got {self.trials}")
        if (
            self.r_min_m is not None
            and self.r_max_m is not None
            and not self.r_min_m < self.r_max_m
        ):
            raise ConfigError(
                f"field 'r_max_m': must exceed r_min_m={self.r_min_m}, got {self.r_max_m}"
            )
        if self.mode is not None and self.mode not in ("proposed", "random"):
            raise ConfigError(
                f"field 'mode': must be 'proposed' or 'random', got {self.mode!r}"
            )
        self.candidate_distances()
        self.candidate_powers()

    @classmethod
    def from_mapping(cls, doc: dict[str, Any]) -> "ScenarioConfig":
        known = _STR_KEYS | _FLOAT_KEYS | _INT_KEYS
        kwargs: dict[str, Any] = {}
        for key, value in doc.items():
            if key not in known:
                raise ConfigError(f"unknown config field {key!r}")
            if value is None:
                continue
            if key in _STR_KEYS:
                if not isinstance(value, str):
                    raise ConfigError(f"field {key!r}: expected a string, got {value!r}")
            elif key in _INT_KEYS:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"field {key!r}: expected an integer, got {value!r}")
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"field {key!r}: expected a number, got {value!r}")
                value = float(value)
            kwargs[key] = value
        if "direction" not in kwargs:
            raise ConfigError("missing required field 'direction'")
        return cls(**kwargs)

    def require(self, *keys: str) -> None:
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError(f"missing required field {key!r}")

    def candidate_distances(self) -> list[float] | None:
        if self.candidates_m is None:
            return None
        values = _parse_float_list("candidates_m", self.candidates_m)
        if len(values) < 2:
            raise ConfigError("field 'candidates_m': need at least 2 distances")
        return values

    def candidate_powers(self) -> list[float] | None:
        if self.tx_powers_w is None:
            return None
        values = _parse_float_list("tx_powers_w", self.tx_powers_w)
        if self.candidates_m is not None and len(values) != len(
            self.candidate_distances()
        ):
            raise ConfigError(
                "field 'tx_powers_w': must list one power per candidate distance"
            )
        return values

    def sic(self) -> SicModel:
        return SicModel(self.beta)

    def as_metadata(self) -> dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    # scenario builders -------------------------------------------------

    def dl_scenario(self) -> DlScenario:
        self.require("a1", "total_power_w", "noise_psd_w_per_hz")
        budget = PowerBudget(self.total_power_w, self.noise_psd_w_per_hz)
        return DlScenario(self.a1, budget, PathLoss(self.alpha))

    def ul_scenario(self) -> UlScenario:
        self.require("p1_w", "p2_w", "noise_psd_w_per_hz")
        return UlScenario(
            self.p1_w, self.p2_w, self.noise_psd_w_per_hz, PathLoss(self.alpha)
        )

    def scenario(self) -> DlScenario | UlScenario:
        return self.dl_scenario() if self.direction == "downlink" else self.ul_scenario()


def _parse_float_list(key: str, text: str) -> list[float]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = float(part)
        except ValueError:
            raise ConfigError(f"field {key!r}: {part!r} is not a number") from None
        if value <= 0:
            raise ConfigError(f"field {key!r}: values must be positive, got {value}")
        values.append(value)
    if not values:
        raise ConfigError(f"field {key!r}: empty list")
    return values


def _load_document(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a single flat JSON object")
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"field {key!r}: nested values are not allowed")
    return doc


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a flat JSON scenario config."""
    return ScenarioConfig.from_mapping(_load_document(text))


# output formatting -----------------------------------------------------


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    if value is None:
        return ""
    return str(value)


def _comment_lines(config: dict[str, Any], seed: int | None, timestamp: bool) -> list[str]:
    lines = [
        f"# nomalink {__version__}",
        f"# config: {json.dumps(config, sort_keys=True)}",
        f"# seed: {seed if seed is not None else ''}",
    ]
    if timestamp:
        lines.append(f"# generated: {datetime.now(timezone.utc).isoformat()}")
    return lines


def _csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: dict[str, Any],
    seed: int | None,
    timestamp: bool,
    extra_comments: Sequence[str] = (),
) -> str:
    lines = _comment_lines(config, seed, timestamp)
    lines.extend(extra_comments)
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def emit_csv(
    records: Sequence[Any],
    config: dict[str, Any] | None = None,
    seed: int | None = None,
    timestamp: bool = True,
    extra_comments: Sequence[str] = (),
) -> str:
    """Render sweep records as CSV with leading metadata comments.

    Numbers carry 9 significant digits, so a round trip through the
    text is good to better than 1e-8 relative.
    """
    records = tuple(records)
    if not records:
        raise ValueError("no records to emit")
    rows = (
        (
            r.swept_distance_m,
            r.noma_rate_u1,
            r.oma_rate_u1,
            r.noma_rate_u2,
            r.oma_rate_u2,
            r.dominant_u1,
            r.dominant_u2,
            r.threshold_m,
        )
        for r in records
    )
    return _csv(SWEEP_COLUMNS, rows, config or {}, seed, timestamp, extra_comments)


def _record_dict(record: Any) -> dict[str, Any]:
    return {col: getattr(record, col) for col in SWEEP_COLUMNS}


def emit_json(records: Sequence[Any]) -> str:
    """Render sweep records as a JSON array."""
    return json.dumps([_record_dict(r) for r in records], indent=2) + "\n"


# subcommand handlers ----------------------------------------------------


def _threshold_value(cfg: ScenarioConfig) -> float:
    if cfg.direction == "downlink":
        cfg.require("a1", "total_power_w", "noise_psd_w_per_hz")
        p = cfg.total_power_w / cfg.noise_psd_w_per_hz
        return dl_threshold(DlThresholdInput(cfg.a1, p, cfg.alpha))
    cfg.require("d1_m", "p1_w", "p2_w", "noise_psd_w_per_hz")
    n0 = cfg.noise_psd_w_per_hz
    return ul_threshold(cfg.d1_m, cfg.p1_w / n0, cfg.p2_w / n0, cfg.alpha)


def _cmd_threshold(cfg: ScenarioConfig, fmt: str, timestamp: bool) -> str:
    radius = _threshold_value(cfg)
    if fmt == "json":
        return json.dumps({"direction": cfg.direction, "threshold_m": radius}) + "\n"
    return f"{radius:.9g}\n"


def _build_report(cfg: ScenarioConfig) -> RateReport:
    cfg.require("d1_m", "d2_m")
    if not cfg.d1_m < cfg.d2_m:
        raise ConfigError(f"field 'd2_m': must exceed d1_m={cfg.d1_m}, got {cfg.d2_m}")
    cluster = cfg.scenario().cluster(cfg.d1_m, cfg.d2_m)
    return rate_report(cluster, cfg.sic())


def _cmd_rates(cfg: ScenarioConfig, fmt: str, timestamp: bool) -> str:
    report = _build_report(cfg)
    if fmt == "json":
        payload = {
            "direction": cfg.direction,
            "users": [asdict(e) for e in report.entries],
            "noma_sum_rate": report.noma_sum_rate,
            "oma_sum_rate": report.oma_sum_rate,
        }
        return json.dumps(payload, indent=2) + "\n"
    columns = ("user_id", "distance_m", "noma_rate", "oma_rate", "noma_dominant")
    rows = (
        (e.user_id, e.distance_m, e.noma_rate, e.oma_rate, e.noma_dominant)
        for e in report.entries
    )
    extra = [
        f"# noma_sum_rate: {_fmt(report.noma_sum_rate)}",
        f"# oma_sum_rate: {_fmt(report.oma_sum_rate)}",
    ]
    return _csv(columns, rows, cfg.as_metadata(), cfg.seed, timestamp, extra)


def _sweep_result(cfg: ScenarioConfig) -> SweepResult:
    cfg.require("swept_user", "sweep_lo_m", "sweep_hi_m", "sweep_step_m")
    fixed_user = "d2" if cfg.swept_user == "d1" else "d1"
    fixed_key = "d1_m" if fixed_user == "d1" else "d2_m"
    cfg.require(fixed_key)
    spec = SweepSpec(
        direction=cfg.direction,
        fixed_user=fixed_user,
        fixed_distance_m=getattr(cfg, fixed_key),
        lo_m=cfg.sweep_lo_m,
        hi_m=cfg.sweep_hi_m,
        step_m=cfg.sweep_step_m,
        scenario=cfg.scenario(),
        sic=cfg.sic(),
    )
    return run_sweep(spec)


def _cmd_sweep(cfg: ScenarioConfig, fmt: str, timestamp: bool) -> str:
    result = _sweep_result(cfg)
    if fmt == "json":
        return emit_json(result.records)
    extra = [
        f"# crossover_m: {_fmt(result.crossover_m)}",
        f"# skipped_rows: {result.skipped_rows}",
    ]
    return emit_csv(
        result.records, cfg.as_metadata(), cfg.seed, timestamp, extra_comments=extra
    )


def _mc_summary(cfg: ScenarioConfig) -> MonteCarloSummary:
    cfg.require("trials", "r_min_m", "r_max_m")
    spec = MonteCarloSpec(
        trials=cfg.trials,
        r_min_m=cfg.r_min_m,
        r_max_m=cfg.r_max_m,
        scenario=cfg.scenario(),
        seed=cfg.seed,
        sic=cfg.sic(),
    )
    return run_monte_carlo(spec)


_MODE_COLUMNS = (
    "mode",
    "pairs_formed",
    "dominance_fraction_u1",
    "dominance_fraction_u2",
    "mean_noma_rate_u1",
    "mean_oma_rate_u1",
    "mean_noma_rate_u2",
    "mean_oma_rate_u2",
    "mean_noma_sum_rate",
    "mean_oma_sum_rate",
)


def _cmd_monte_carlo(cfg: ScenarioConfig, fmt: str, timestamp: bool) -> str:
    summary = _mc_summary(cfg)
    if fmt == "json":
        return json.dumps(asdict(summary), indent=2) + "\n"
    rows = []
    for name in ("proposed", "random"):
        stats = getattr(summary, name)
        rows.append(
            (name,)
            + tuple(getattr(stats, col) for col in _MODE_COLUMNS[1:])
        )
    extra = [
        f"# placement: {summary.placement}",
        f"# pairing_note: {summary.pairing_note}",
        f"# feasibility_rate: {_fmt(summary.feasibility_rate)}",
    ]
    return _csv(_MODE_COLUMNS, rows, cfg.as_metadata(), cfg.seed, timestamp, extra)


def _pair_selection(cfg: ScenarioConfig) -> PairSelection:
    cfg.require("candidates_m", "mode")
    distances = cfg.candidate_distances()
    if cfg.direction == "downlink":
        cfg.require("a1", "total_power_w", "noise_psd_w_per_hz")
        p = cfg.total_power_w / cfg.noise_psd_w_per_hz
        config: DlThresholdInput | UlPairingConfig = DlThresholdInput(
            cfg.a1, p, cfg.alpha
        )
        candidates = [
            UserTerminal(f"c{k}", d) for k, d in enumerate(distances)
        ]
    else:
        cfg.require("tx_powers_w", "noise_psd_w_per_hz")
        powers = cfg.candidate_powers()
        config = UlPairingConfig(cfg.noise_psd_w_per_hz, cfg.alpha)
        candidates = [
            UserTerminal(f"c{k}", d, w)
            for k, (d, w) in enumerate(zip(distances, powers))
        ]
    return select_pairs(candidates, config, cfg.mode, cfg.seed)


def _cmd_pair(cfg: ScenarioConfig, fmt: str, timestamp: bool) -> str:
    selection = _pair_selection(cfg)
    rows = [
        {
            "kind": "pair",
            "strong_id": p.strong.id,
            "strong_d_m": p.strong.distance_m,
            "weak_id": p.weak.id,
            "weak_d_m": p.weak.distance_m,
            "threshold_m": p.threshold_m,
            "feasible": p.feasible,
        }
        for p in selection.pairs
    ] + [
        {
            "kind": "singleton",
            "strong_id": u.id,
            "strong_d_m": u.distance_m,
            "weak_id": None,
            "weak_d_m": None,
            "threshold_m": None,
            "feasible": False,
        }
        for u in selection.singletons
    ]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    columns = (
        "kind",
        "strong_id",
        "strong_d_m",
        "weak_id",
        "weak_d_m",
        "threshold_m",
        "feasible",
    )
    table = ([row[c] for c in columns] for row in rows)
    extra = [f"# mode: {selection.mode}"]
    return _csv(columns, table, cfg.as_metadata(), cfg.seed, timestamp, extra)


_COMMANDS = {
    "threshold": _cmd_threshold,
    "rates": _cmd_rates,
    "sweep": _cmd_sweep,
    "monte-carlo": _cmd_monte_carlo,
    "pair": _cmd_pair,
}

_FLAG_HELP = {
    "direction": "downlink or uplink",
    "d1_m": "near (strong) user distance, meters",
    "d2_m": "far (weak) user distance, meters",
    "a1": "downlink power fraction of the strong user, in (0, 0.5)",
    "total_power_w": "downlink base-station power, watts",
    "p1_w": "uplink near-user tx power, watts",
    "p2_w": "uplink far-user tx power, watts",
    "noise_psd_w_per_hz": "receiver noise spectral density, W/Hz",
    "alpha": "path-loss exponent (default 4)",
    "beta": "residual fraction of canceled signals, 0 = perfect SIC",
    "swept_user": "which distance the sweep moves: d1 or d2",
    "sweep_lo_m": "sweep start, meters",
    "sweep_hi_m": "sweep end (inclusive when on the grid), meters",
    "sweep_step_m": "sweep step, meters",
    "trials": "Monte-Carlo trial count",
    "r_min_m": "annulus inner radius, meters",
    "r_max_m": "annulus outer radius, meters",
    "seed": "random seed",
    "candidates_m": "comma-separated candidate distances, meters",
    "tx_powers_w": "comma-separated per-candidate tx powers (uplink), watts",
    "mode": "pair selection mode: proposed or random",
    "output": "write results to this path instead of stdout",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomalink",
        description="Link-level NOMA vs OMA rate and user-selection analysis.",
    )
    parser.add_argument("--version", action="version", version=f"nomalink {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", help="path to a flat JSON scenario config")
        sub.add_argument("--format", choices=("csv", "json"), default="csv")
        sub.add_argument(
            "--no-timestamp",
            action="store_true",
            help="omit the generated-at comment line (for reproducible output)",
        )
        for key, help_text in _FLAG_HELP.items():
            flag = "--" + key.replace("_", "-")
            if key in _INT_KEYS:
                sub.add_argument(flag, dest=key, type=int, help=help_text)
            elif key in _STR_KEYS:
                sub.add_argument(flag, dest=key, help=help_text)
            else:
                sub.add_argument(flag, dest=key, type=float, help=help_text)
    return parser


def _resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    doc: dict[str, Any] = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = _load_document(fh.read())
    for key in _FLAG_HELP:
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = value
    return ScenarioConfig.from_mapping(doc)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        text = _COMMANDS[args.command](cfg, args.format, not args.no_timestamp)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
