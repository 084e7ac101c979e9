"""Parameter grids, per-row physics and deterministic CSV output for the sweep commands."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import gaussian, keyrate, link, radar
from .solvers import NoRootError

STATUS_OK = "ok"
STATUS_NO_ROOT = "no_root"
STATUS_UNDEFINED = "undefined"

# Frozen header registry.
COLUMNS: dict[str, tuple[str, ...]] = {
    "entanglement-gen": ("freq_hz", "temp_k", "squeeze_db", "nbar", "e_ln"),
    "entanglement-dist": ("freq_hz", "squeeze_db", "transmissivity", "e_ln_out"),
    "keyrate": (
        "freq_hz",
        "temp_k",
        "dist_m",
        "transmissivity",
        "rate_bits_per_use",
        "plob_bits_per_use",
    ),
    "accessible-freq": ("transmissivity", "temp_k", "eta", "f_access_hz", "eq13_bound_hz", "status"),
    "min-aperture": ("freq_hz", "temp_k", "eta", "ra_min_m", "status"),
    "radar": (
        "freq_hz",
        "temp_k",
        "nbar_b",
        "kappa",
        "ns",
        "e_q",
        "e_c",
        "advantage_db",
        "status",
    ),
}

# Default spacing when an axis is given as a range and neither --log nor --linear is set.
LOG_AXES = frozenset({"freq", "dist", "nb"})


class SweepError(ValueError):
    """Invalid sweep specification (maps to exit code 2)."""


@dataclass(frozen=True)
class Axis:
    """One parameter: either explicit values or a ``min:max`` range."""

    name: str
    values: tuple = ()
    lo: Optional[float] = None
    hi: Optional[float] = None

    @property
    def is_range(self) -> bool:
        return self.lo is not None

    @classmethod
    def parse(cls, name: str, text: str) -> "Axis":
        text = str(text).strip()
        try:
            if ":" in text:
                lo, hi = (float(v) for v in text.split(":"))
                return cls(name, lo=lo, hi=hi)
            return cls(name, values=tuple(float(v) for v in text.split(",") if v.strip()))
        except ValueError as exc:
            raise SweepError(f"--{name}: cannot parse {text!r}") from exc

    def expand(self, points: int, log: Optional[bool]) -> tuple[float, ...]:
        if not self.is_range:
            if not self.values:
                raise SweepError(f"--{self.name}: no values")
            return self.values
        if points < 2:
            raise SweepError("--points must be at least 2")
        if not self.lo < self.hi:
            raise SweepError(f"--{self.name}: range needs min < max, got {self.lo}:{self.hi}")
        use_log = self.name in LOG_AXES if log is None else log
        if use_log:
            if self.lo <= 0:
                raise SweepError(f"--{self.name}: log spacing needs min > 0")
            grid = np.geomspace(self.lo, self.hi, points)
        else:
            grid = np.linspace(self.lo, self.hi, points)
        return tuple(float(v) for v in grid)


@dataclass(frozen=True)
class SweepSpec:
    command: str
    axes: tuple  # Axis objects in nesting order (outermost first)
    fixed: dict = field(default_factory=dict)
    points: int = 200
    log: Optional[bool] = None

    def grid(self) -> list[dict]:
        names = [a.name for a in self.axes]
        values = [a.expand(self.points, self.log) for a in self.axes]
        return [dict(self.fixed, **dict(zip(names, combo))) for combo in itertools.product(*values)]


@dataclass(frozen=True)
class Command:
    """Sweep command layout: grid axes (nesting order), scalar-only parameters and defaults."""

    name: str
    axes: tuple[str, ...]
    scalars: tuple[str, ...]
    defaults: dict
    row: Callable[[dict], dict]
    help: str


# ---------------------------------------------------------------- row physics


def _row_entanglement_gen(p: dict) -> dict:
    n = gaussian.thermal_photon_number(p["freq"], p["temp"])
    state = gaussian.tms_thermal_state(gaussian.Squeezing.from_db(p["squeeze-db"]), n, n)
    return {
        "freq_hz": p["freq"],
        "temp_k": p["temp"],
        "squeeze_db": p["squeeze-db"],
        "nbar": n,
        "e_ln": gaussian.log_negativity(state),
    }


def _row_entanglement_dist(p: dict) -> dict:
    state = gaussian.symmetric_thermal_state(
        p["freq"], p["temp"], gaussian.Squeezing.from_db(p["squeeze-db"])
    )
    det = link.Detector(p["eta"], gaussian.thermal_variance(p["freq"], p["temp"]))
    return {
        "freq_hz": p["freq"],
        "squeeze_db": p["squeeze-db"],
        "transmissivity": p["transmissivity"],
        "e_ln_out": link.distributed_log_negativity(state, p["transmissivity"], det),
    }


def _row_keyrate(p: dict) -> dict:
    lk = link.DiffractionLink(p["freq"], p["dist"], p["w0"], p["ra"])
    t = lk.transmissivity
    v0 = gaussian.thermal_variance(p["freq"], p["temp"])
    if 0.0 < t < 1.0:
        rate = keyrate.rr_key_rate(v0, t, p["eta"]).rate
        plob = keyrate.plob_bound(v0, t)
    else:
        rate = plob = math.nan
    return {
        "freq_hz": p["freq"],
        "temp_k": p["temp"],
        "dist_m": p["dist"],
        "transmissivity": t,
        "rate_bits_per_use": rate,
        "plob_bits_per_use": plob,
    }


def _row_accessible_freq(p: dict) -> dict:
    t, temp, eta = p["transmissivity"], p["temp"], p["eta"]
    try:
        f_access, status = keyrate.accessible_frequency_numeric(t, temp, eta), STATUS_OK
    except NoRootError:
        f_access, status = math.nan, STATUS_NO_ROOT
    return {
        "transmissivity": t,
        "temp_k": temp,
        "eta": eta,
        "f_access_hz": f_access,
        "eq13_bound_hz": keyrate.accessible_frequency_bound(t, temp),
        "status": status,
    }


def _row_min_aperture(p: dict) -> dict:
    try:
        ra = keyrate.min_aperture_radius(
            p["freq"],
            distance=p["dist"],
            w0=p["w0"],
            eta=p["eta"],
            detector_temperature=p["temp"],
            target_rate=p["target-rate"],
        )
        status = STATUS_OK
    except NoRootError:
        ra, status = math.nan, STATUS_NO_ROOT
    return {"freq_hz": p["freq"], "temp_k": p["temp"], "eta": p["eta"], "ra_min_m": ra, "status": status}


def _row_radar(p: dict) -> dict:
    if "nb" in p:
        freq = temp = None
        nb = p["nb"]
    else:
        freq, temp = p["freq"], p["temp"]
        nb = gaussian.thermal_photon_number(freq, temp)
    sc = radar.IlluminationScenario(kappa=p["kappa"], ns=p["ns"], nb=nb)
    res = radar.qr_exponents(sc)
    try:
        adv, status = res.advantage_db, STATUS_OK
    except (ZeroDivisionError, ValueError):
        adv, status = math.nan, STATUS_UNDEFINED
    return {
        "freq_hz": freq,
        "temp_k": temp,
        "nbar_b": nb,
        "kappa": p["kappa"],
        "ns": p["ns"],
        "e_q": res.quantum_exponent,
        "e_c": res.coherent_exponent,
        "advantage_db": adv,
        "status": status,
    }


COMMANDS: dict[str, Command] = {
    c.name: c
    for c in (
        Command(
            "entanglement-gen",
            axes=("freq", "temp", "squeeze-db"),
            scalars=(),
            defaults={"freq": "1e12,5e12", "temp": "3:296", "squeeze-db": "0,3,5,10,15"},
            row=_row_entanglement_gen,
            help="log-negativity of the squeezed thermal resource vs temperature and squeezing",
        ),
        Command(
            "entanglement-dist",
            axes=("freq", "squeeze-db", "transmissivity"),
            scalars=("temp", "eta"),
            defaults={
                "freq": "2e12,5e12",
                "squeeze-db": "3,10",
                "transmissivity": "0:1",
                "temp": "30",
                "eta": "0.1",
            },
            row=_row_entanglement_dist,
            help="output log-negativity after one arm crosses the link",
        ),
        Command(
            "keyrate",
            axes=("freq", "temp", "dist"),
            scalars=("eta", "w0", "ra"),
            defaults={
                "freq": "1e13,2e13,3e13,4e13,5e13",
                "temp": "30,173",
                "dist": "1e3:3e5",
                "eta": "0.1",
                "w0": "0.1",
                "ra": "0.1",
            },
            row=_row_keyrate,
            help="reverse-reconciliation key rate and capacity bound vs distance",
        ),
        Command(
            "accessible-freq",
            axes=("temp", "eta", "transmissivity"),
            scalars=(),
            defaults={"temp": "30,173", "eta": "0.1,1", "transmissivity": "0.01:0.99"},
            row=_row_accessible_freq,
            help="lowest frequency with a positive key rate vs transmissivity",
        ),
        Command(
            "min-aperture",
            axes=("temp", "eta", "freq"),
            scalars=("dist", "w0", "target-rate"),
            defaults={
                "temp": "296",
                "eta": "0.1,0.5,1",
                "freq": "3e12:5e13",
                "dist": "5e5",
                "w0": "0.1",
                "target-rate": "1e-4",
            },
            row=_row_min_aperture,
            help="minimum receiver aperture for a target key rate over a ground link",
        ),
        Command(
            "radar",
            axes=("kappa", "ns", "temp", "freq"),
            scalars=(),
            defaults={"kappa": "0.01", "ns": "0.01", "temp": "296", "freq": "1e12:5e13"},
            row=_row_radar,
            help="entangled vs coherent illumination Chernoff exponents",
        ),
    )
}


def build_spec(command: str, given: dict, points: int = 200, log: Optional[bool] = None) -> SweepSpec:
    """Resolve user-supplied parameter strings over the command defaults."""
    cmd = COMMANDS[command]
    values = dict(cmd.defaults)
    values.update({k: v for k, v in given.items() if v is not None})
    axis_names = list(cmd.axes)
    if command == "radar" and given.get("nb") is not None:
        # Background occupation given directly replaces the (freq, temp) axes.
        axis_names = [a for a in axis_names if a not in ("freq", "temp")] + ["nb"]
    allowed = set(axis_names) | set(cmd.scalars) | ({"nb"} if command == "radar" else set())
    unknown = {k for k, v in given.items() if v is not None and k not in allowed}
    if unknown:
        raise SweepError(f"{command} does not use: {', '.join('--' + k for k in sorted(unknown))}")

    axes = tuple(Axis.parse(name, values[name]) for name in axis_names)
    fixed = {}
    for name in cmd.scalars:
        ax = Axis.parse(name, values[name])
        if ax.is_range or len(ax.values) != 1:
            raise SweepError(f"--{name} takes a single value for {command}")
        fixed[name] = ax.values[0]
    return SweepSpec(command, axes, fixed, points, log)


def compute_rows(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """Evaluate every grid point; output order is the grid order regardless of ``workers``."""
    row = COMMANDS[spec.command].row
    grid = spec.grid()
    if workers <= 1:
        return [row(p) for p in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, grid, chunksize=max(1, len(grid) // (4 * workers))))


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return f"{float(v):.8e}"


def render_csv(command: str, rows: Iterable[dict]) -> str:
    cols = COLUMNS[command]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([format_value(r[c]) for c in cols])
    return buf.getvalue()


def failed(rows: Iterable[dict]) -> bool:
    return any(r.get("status") == STATUS_NO_ROOT for r in rows)
