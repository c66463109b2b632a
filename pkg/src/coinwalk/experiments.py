"""Batch runs over baker-family members, recorded as CSV time series.

A configuration file is INI text with one section per run::

    [fig3]
    kind = entropy          ; entropy | variance | wigner
    ring_size = 802
    qubits = 7              ; N, a range "4-8" or a list "3,5"
    n = all                 ; all | N | integers, ranges, lists, e.g. "1,N"
    even_dims = 130         ; optional BVS maps on even dimensions
    eta = 0.5
    kappa = 0.5
    coins = i               ; zero | i | 3pi4 | a:b (custom amplitudes)
    t_max = 400
    stride = 1              ; optional; default 1 up to t=200, then 5

Optional keys: ``observables``, ``slope_window``, ``saturation_window``,
``grid_times`` (wigner runs only).
"""

from __future__ import annotations

import configparser
import io
import json
import logging
import math
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baker import BakerSpec, build_baker_applier
from .hilbert import FloquetAngles
from .observables import (
    SERIES_LABELS,
    ObservableSeries,
    WrapAroundError,
    entropy_saturation,
    growth_exponent,
    position_distribution,
    position_variance,
    reduced_density,
    sd_slope,
    state_linear_entropy,
    state_von_neumann_entropy,
)
from .walker import NAMED_COINS, NumericalGuardError, SystemState, evolve, init_state, uniform_product_coin
from .wigner import classical_phase_grid, classical_walk_distribution, distance, wigner_from_density

log = logging.getLogger(__name__)

KINDS = ("entropy", "variance", "wigner")
DEFAULT_OBSERVABLES = {
    "entropy": ("linear_entropy_bits",),
    "variance": ("variance", "std_dev"),
    "wigner": ("wigner_distance",),
}
WIGNER_MAX_RING = 64
DENSE_STRIDE_UNTIL = 200
LATE_STRIDE = 5

PRESETS = {
    "fig3": """
[fig3]
kind = entropy
ring_size = 802
qubits = 7
n = all
even_dims = 130
eta = 0.5
kappa = 0.5
coins = i
t_max = 400
""",
    "fig4": """
[fig4]
kind = entropy
ring_size = 802
qubits = 1-8
n = N
eta = 0
kappa = 0
coins = zero 3pi4 i
t_max = 400
""",
    "fig5": """
[fig5]
kind = variance
ring_size = 802
qubits = 7
n = all
eta = 0.5
kappa = 0.5
coins = i
t_max = 400
""",
    "fig6": """
[fig6]
kind = variance
ring_size = 802
qubits = 4-8
n = 1,N
eta = 0
kappa = 0
coins = i
t_max = 400
""",
    "fig7": """
[fig7]
kind = wigner
ring_size = 64
qubits = 7
n = all
eta = 0.5
kappa = 0.5
coins = i
t_max = 31
stride = 1
""",
}


class ConfigError(ValueError):
    """An experiment configuration violates one of its invariants."""


@dataclass
class ExperimentConfig:
    name: str
    kind: str
    ring_size: int
    members: tuple[BakerSpec, ...]
    coins: tuple[str, ...] = ("i",)
    t_max: int = 100
    stride: int | None = None
    observables: tuple[str, ...] = ()
    slope_window: tuple[float, float] | None = None
    saturation_window: tuple[float, float] | None = None
    grid_times: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.observables:
            self.observables = DEFAULT_OBSERVABLES.get(self.kind, ())
        self.validate()

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"[{self.name}] kind must be one of {KINDS}, got {self.kind!r}")
        if self.ring_size < 2:
            raise ConfigError(f"[{self.name}] ring_size must be >= 2")
        if self.t_max < 0:
            raise ConfigError(f"[{self.name}] t_max must be >= 0")
        if self.stride is not None and self.stride < 1:
            raise ConfigError(f"[{self.name}] stride must be >= 1")
        if not self.members:
            raise ConfigError(f"[{self.name}] no baker members selected")
        if not self.coins:
            raise ConfigError(f"[{self.name}] no coin states selected")
        for c in self.coins:
            parse_coin(c)
        bad = [o for o in self.observables if o not in SERIES_LABELS]
        if bad:
            raise ConfigError(f"[{self.name}] unknown observables {bad}")
        spread = {"variance", "std_dev"} & set(self.observables)
        if spread and self.ring_size < 2 * self.t_max + 2:
            raise ConfigError(
                f"[{self.name}] variance needs ring_size >= 2*t_max+2 = {2 * self.t_max + 2}, "
                f"got {self.ring_size}"
            )
        if self.kind == "wigner" and self.ring_size > WIGNER_MAX_RING:
            raise ConfigError(
                f"[{self.name}] dense Wigner grids need ring_size <= {WIGNER_MAX_RING}; use a smaller ring"
            )
        if "wigner_distance" in self.observables and self.ring_size > WIGNER_MAX_RING:
            raise ConfigError(f"[{self.name}] wigner_distance needs ring_size <= {WIGNER_MAX_RING}")

    def record_times(self) -> list[int]:
        if self.stride is not None:
            return list(range(0, self.t_max + 1, self.stride))
        early = list(range(0, min(self.t_max, DENSE_STRIDE_UNTIL) + 1))
        late = list(range(DENSE_STRIDE_UNTIL + LATE_STRIDE, self.t_max + 1, LATE_STRIDE))
        return early + late

    def to_dict(self) -> dict:
        d = asdict(self)
        d["members"] = [
            {"label": m.label, "dim": m.dim, "num_qubits": m.num_qubits, "n": m.n, "eta": m.angles.eta, "kappa": m.angles.kappa}
            for m in self.members
        ]
        return d


def parse_coin(token: str) -> str:
    if token in NAMED_COINS:
        return token
    try:
        a, b = (complex(part) for part in token.split(":"))
    except ValueError:
        raise ConfigError(f"unknown coin {token!r}; use zero, i, 3pi4 or a:b") from None
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-12:
        raise ConfigError(f"coin {token!r} is not normalized")
    return token


def coin_vector(token: str, dim: int) -> np.ndarray:
    parse_coin(token)
    qubit = NAMED_COINS[token] if token in NAMED_COINS else [complex(p) for p in token.split(":")]
    return uniform_product_coin(qubit, dim)


def _int_list(text: str, n_value: int | None = None) -> list[int]:
    out: list[int] = []
    for part in text.replace(",", " ").split():
        if part == "N":
            if n_value is None:
                raise ConfigError("'N' is only meaningful in the n key")
            out.append(n_value)
        elif part == "all":
            if n_value is None:
                raise ConfigError("'all' is only meaningful in the n key")
            out.extend(range(1, n_value + 1))
        elif "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    seen: list[int] = []
    for v in out:
        if v not in seen:
            seen.append(v)
    return seen


def _window(text: str | None) -> tuple[float, float] | None:
    if not text:
        return None
    lo, hi = text.replace(",", " ").split()
    return float(lo), float(hi)


def config_from_section(name: str, sec: configparser.SectionProxy) -> ExperimentConfig:
    if "ring_size" not in sec:
        raise ConfigError(f"[{name}] ring_size is required")
    try:
        angles = FloquetAngles(sec.getfloat("eta", 0.0), sec.getfloat("kappa", 0.0))
        members: list[BakerSpec] = []
        if "qubits" in sec:
            for N in _int_list(sec["qubits"]):
                for n in _int_list(sec.get("n", "all"), N):
                    if not 1 <= n <= N:
                        raise ConfigError(f"[{name}] n={n} outside [1, {N}]")
                    members.append(BakerSpec.qubit(N, n, angles))
        for D in _int_list(sec.get("even_dims", "")):
            if D < 2 or D % 2:
                raise ConfigError(f"[{name}] even_dims entry {D} is not an even dimension >= 2")
            members.append(BakerSpec.even(D, angles))
        stride = sec.get("stride")
        known = {
            "kind", "ring_size", "qubits", "n", "even_dims", "eta", "kappa", "coins", "t_max",
            "stride", "observables", "slope_window", "saturation_window", "grid_times",
        }
        unknown = set(sec.keys()) - known
        if unknown:
            raise ConfigError(f"[{name}] unknown keys {sorted(unknown)}")
        return ExperimentConfig(
            name=name,
            kind=sec.get("kind", "entropy"),
            ring_size=sec.getint("ring_size"),
            members=tuple(members),
            coins=tuple(sec.get("coins", "i").split()),
            t_max=sec.getint("t_max", 100),
            stride=int(stride) if stride else None,
            observables=tuple(sec.get("observables", "").replace(",", " ").split()),
            slope_window=_window(sec.get("slope_window")),
            saturation_window=_window(sec.get("saturation_window")),
            grid_times=tuple(_int_list(sec.get("grid_times", ""))),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{name}] {exc}") from None


def load_configs(path: str | Path | None = None, preset: str | None = None) -> list[ExperimentConfig]:
    """Read run sections from a preset, a file, or a file layered over a preset.

    With ``preset`` only that section runs; keys from the file's section of
    the same name override the preset's.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        parser.read_string(PRESETS[preset])
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from None
    names = [preset] if preset is not None else parser.sections()
    if not names:
        raise ConfigError("configuration defines no runs")
    return [config_from_section(name, parser[name]) for name in names]


# running


@dataclass
class MemberResult:
    spec: BakerSpec
    coin: str
    series: dict[str, ObservableSeries]
    summary: dict[str, float | None] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{self.spec.label}_{self.coin.replace(':', '_')}"


@dataclass
class RunResult:
    config: ExperimentConfig
    members: list[MemberResult]
    grids: dict[str, list] = field(default_factory=dict)
    duration: float = 0.0


def _recorders(config: ExperimentConfig):
    def entropy(state):
        return state_linear_entropy(state)

    def von_neumann(state):
        return state_von_neumann_entropy(state)

    def variance(state):
        return position_variance(position_distribution(state))

    def std_dev(state):
        return math.sqrt(max(variance(state), 0.0))

    def wigner_distance(state):
        return distance(_wigner(state), _classical(state))

    table = {
        "linear_entropy_bits": entropy,
        "von_neumann_bits": von_neumann,
        "variance": variance,
        "std_dev": std_dev,
        "wigner_distance": wigner_distance,
    }
    return {name: table[name] for name in config.observables}


def _wigner(state: SystemState):
    return wigner_from_density(reduced_density(state), time=state.time)


def _classical(state: SystemState):
    return classical_phase_grid(classical_walk_distribution(state.ring_size, state.time))


def simulate_member(config: ExperimentConfig, spec: BakerSpec, coin: str, threads: int = 1):
    """Evolve one member and sample the configured observables."""
    baker = build_baker_applier(spec)
    state = init_state(config.ring_size, coin_vector(coin, spec.dim))
    record = config.record_times()
    recorders = _recorders(config)
    values: dict[str, list[float]] = {name: [] for name in recorders}
    grids = []
    grid_times = set(config.grid_times)
    for t in record:
        state = evolve(state, t - state.time, baker, threads=threads)
        cache: dict[str, float] = {}
        for name, fn in recorders.items():
            if name == "std_dev" and "variance" in cache:
                cache[name] = math.sqrt(max(cache["variance"], 0.0))
            else:
                cache[name] = fn(state)
            values[name].append(cache[name])
        if t in grid_times:
            grids.append(_wigner(state))
    series = {name: ObservableSeries(record, vals, name) for name, vals in values.items()}
    return MemberResult(spec, coin, series), grids


def _ehrenfest(spec: BakerSpec) -> float:
    return math.log2(spec.dim)


def _summarize(config: ExperimentConfig, member: MemberResult) -> None:
    s = member.series
    tmax = config.t_max
    if "linear_entropy_bits" in s:
        ent = s["linear_entropy_bits"]
        lo, hi = config.saturation_window or (5 * _ehrenfest(member.spec), tmax)
        try:
            s0, period = entropy_saturation(ent, (lo, hi), math.ceil(_ehrenfest(member.spec)))
        except ValueError:
            s0, period = None, None
        member.summary["saturation"] = s0
        member.summary["period"] = period
        member.summary["final_entropy"] = float(ent.values[-1])
    if "std_dev" in s:
        sd = s["std_dev"]
        window = config.slope_window or (tmax / 2, tmax)
        try:
            member.summary["sd_slope"] = sd_slope(sd, window)
        except ValueError:
            member.summary["sd_slope"] = None
        try:
            member.summary["short_time_exponent"] = growth_exponent(sd, (2, _ehrenfest(member.spec)))
        except ValueError:
            member.summary["short_time_exponent"] = None
    if "wigner_distance" in s:
        d = s["wigner_distance"]
        late = d.window(2 * tmax / 3, tmax)
        member.summary["late_distance"] = float(late.values.mean()) if len(late) else None


def run_experiment(config: ExperimentConfig, threads: int = 1) -> RunResult:
    """Run every (member, coin) pair of ``config``; members run concurrently."""
    start = time.perf_counter()
    jobs = [(spec, coin) for spec in config.members for coin in config.coins]

    def one(job):
        spec, coin = job
        log.info("[%s] %s coin=%s", config.name, spec.label, coin)
        return simulate_member(config, spec, coin)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one, jobs))
    else:
        outcomes = [one(job) for job in jobs]
    result = RunResult(config, [])
    for member, grids in outcomes:
        _summarize(config, member)
        result.members.append(member)
        if grids:
            result.grids[member.label] = grids
    result.duration = time.perf_counter() - start
    return result


def _require(config: ExperimentConfig, kind: str) -> None:
    if config.kind != kind:
        raise ConfigError(f"[{config.name}] expected a {kind} run, got {config.kind}")


def run_entropy_experiment(config: ExperimentConfig, threads: int = 1) -> RunResult:
    _require(config, "entropy")
    return run_experiment(config, threads)


def run_variance_experiment(config: ExperimentConfig, threads: int = 1) -> RunResult:
    _require(config, "variance")
    return run_experiment(config, threads)


def run_wigner_experiment(config: ExperimentConfig, threads: int = 1) -> RunResult:
    _require(config, "wigner")
    if config.ring_size > WIGNER_MAX_RING:
        raise NumericalGuardError(f"ring_size {config.ring_size} too large for dense Wigner grids")
    return run_experiment(config, threads)


RUNNERS = {
    "entropy": run_entropy_experiment,
    "variance": run_variance_experiment,
    "wigner": run_wigner_experiment,
}


# output


def check_output_dir(out_dir: str | Path) -> Path:
    """Create ``out_dir`` and prove it is writable; raises ``OSError`` otherwise."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fd, probe = tempfile.mkstemp(dir=out, prefix=".probe")
    os.close(fd)
    os.unlink(probe)
    return out


def format_value(v: float) -> str:
    return f"{v:.15e}"


def series_csv(series: ObservableSeries | None) -> str:
    buf = io.StringIO()
    buf.write("t,value\n")
    if series is not None:
        for t, v in zip(series.times, series.values):
            buf.write(f"{int(t)},{format_value(float(v))}\n")
    return buf.getvalue()


def summary_csv(result: RunResult) -> str:
    keys = sorted({k for m in result.members for k in m.summary})
    lines = [",".join(["member", "dim", "num_qubits", "n", "coin"] + keys)]
    for m in result.members:
        row = [m.label, str(m.spec.dim), str(m.spec.num_qubits or ""), str(m.spec.n or ""), m.coin]
        for k in keys:
            v = m.summary.get(k)
            row.append("" if v is None else format_value(v))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def emit_csv(result: RunResult, out_dir: str | Path) -> list[Path]:
    """Write one CSV per (member, observable), a summary CSV and any Wigner grids."""
    out = Path(out_dir)
    name = result.config.name
    written = []
    for m in result.members:
        for obs, series in m.series.items():
            path = out / f"{name}__{m.label}__{obs}.csv"
            path.write_text(series_csv(series))
            written.append(path)
    path = out / f"{name}__summary.csv"
    path.write_text(summary_csv(result))
    written.append(path)
    for label, grids in result.grids.items():
        for g in grids:
            written.append(g.write(out / f"{name}__{label}__wigner_t{g.time}.txt"))
    return written


def write_manifest(results: list[RunResult], files: list[Path], out_dir: str | Path, duration: float) -> Path:
    manifest = {
        "tool": "coinwalk",
        "version": __version__,
        "wall_clock_seconds": round(duration, 3),
        "runs": [
            {"config": r.config.to_dict(), "seconds": round(r.duration, 3)} for r in results
        ],
        "files": [str(p) for p in files],
    }
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, default=list) + "\n")
    return path


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "MemberResult",
    "NumericalGuardError",
    "PRESETS",
    "RunResult",
    "WrapAroundError",
    "check_output_dir",
    "emit_csv",
    "load_configs",
    "run_entropy_experiment",
    "run_experiment",
    "run_variance_experiment",
    "run_wigner_experiment",
    "simulate_member",
    "write_manifest",
]
