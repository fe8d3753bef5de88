"""Scenario configs, sweep execution, and tabular output.

A scenario is a flat key-value config (dotted section names) describing one
experiment: a width sweep of transmission/reflection delays, an inverse
scattering-length sweep of radial delays, a pointer-resolution sweep of the
spin-clock reading, or a single shot.  Results are written as CSV with a
``#``-prefixed provenance preamble plus a JSON manifest, deterministically:
identical config and version give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from . import larmor as lm
from . import observables as obs
from . import propagator as prop
from . import weakvalues as wv
from .amplitudes import MASS, PotentialSpec
from .wavepackets import PacketSpec

SCHEMA_VERSION = 1

TRANSMIT_SWEEP = "transmit_sweep"
REFLECT_SWEEP = "reflect_sweep"
RADIAL_SWEEP = "radial_sweep"
LARMOR_SWEEP = "larmor_sweep"
SINGLE_SHOT = "single_shot"

MODES = (TRANSMIT_SWEEP, REFLECT_SWEEP, RADIAL_SWEEP, LARMOR_SWEEP, SINGLE_SHOT)

STATUS_OK = "ok"

# Residual gate: each row is recomputed on a doubled grid and the delay
# difference reported.  Delays are O(1) lengths, so the gate is absolute.
RESIDUAL_TOL = 1e-6

DELAY_COLUMNS = (
    "status", "dispersion", "dx", "m_omega_dx", "t_eval", "delay",
    "delay_m_omega", "asymptote", "filtering_term", "norm", "com_real",
    "com_spectral", "residual", "completed",
    "omega_over_c", "mc_over_p", "m_omega_x_i", "m_omega_ct",
)

RADIAL_COLUMNS = (
    "status", "alpha", "dx", "t_eval", "delay", "asymptote", "norm",
    "com_real", "com_spectral", "residual", "completed",
)

LARMOR_COLUMNS = (
    "status", "df", "mean_reading", "re_tau", "im_tau",
    "transmitted_weight", "residual",
)


class ConfigError(Exception):
    """Invalid scenario config; ``errors`` lists every offending field."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Scenario:
    """One resolved experiment: mode, physics parameters, and sweep values."""

    mode: str
    prefix: str
    potential: PotentialSpec | None = None
    p: float = 1.0
    c: float = 1.0
    separation: float = 3.0
    laws: tuple[str, ...] = ("quadratic",)
    x_i: float | None = None          # None: launch at -separation * dx
    t: float | None = None            # None: earliest completed-event time
    dx_values: tuple[float, ...] = ()
    alpha_values: tuple[float, ...] = ()
    df_values: tuple[float, ...] = ()
    config_text: str = ""

    def config_hash(self) -> str:
        return hashlib.sha256(self.config_text.encode()).hexdigest()[:16]


def parse_config(text: str, strict: bool = False) -> Scenario:
    """Parse flat ``section.key = value`` text into a Scenario.

    Unknown keys are rejected under ``strict`` and reported otherwise;
    all physics preconditions are checked before any computation.
    """
    pairs, errors = _read_pairs(text)
    known = _KNOWN_KEYS
    unknown = [k for k in pairs if k not in known]
    if unknown and strict:
        errors.extend(f"unknown key: {k}" for k in sorted(unknown))
    mode = pairs.get("scenario.mode", "")
    if mode not in MODES:
        errors.append(f"scenario.mode must be one of {', '.join(MODES)} (got {mode!r})")
        raise ConfigError(errors)

    p = _get_float(pairs, "packet.p", 1.0, errors)
    c = _get_float(pairs, "packet.c", 1.0, errors)
    sep = _get_float(pairs, "packet.separation", 3.0, errors)
    x_i = None
    if "packet.x_i" in pairs and pairs["packet.x_i"] != "auto":
        x_i = _get_float(pairs, "packet.x_i", 0.0, errors)
    t = _get_float(pairs, "time.t", math.nan, errors)
    t = None if math.isnan(t) else t
    laws = tuple(s.strip() for s in pairs.get("packet.dispersion", "quadratic").split(","))
    for law in laws:
        if law not in ("quadratic", "linear"):
            errors.append(f"packet.dispersion entries must be quadratic or linear (got {law!r})")

    potential = _parse_potential(pairs, mode, errors)
    dx_values = _parse_sweep_dx(pairs, errors)
    alpha_values = _parse_float_list(pairs, "sweep.alpha", errors)
    df_values = _parse_float_list(pairs, "sweep.df", errors)
    prefix = pairs.get("output.prefix", "scenario")

    if p <= 0:
        errors.append("packet.p must be positive")
    if c <= 0:
        errors.append("packet.c must be positive")
    if sep <= 0:
        errors.append("packet.separation must be positive")
    if mode in (TRANSMIT_SWEEP, REFLECT_SWEEP, SINGLE_SHOT) and not dx_values:
        errors.append("sweep.dx (or sweep.dx_log) is required for this mode")
    if mode == RADIAL_SWEEP and not alpha_values:
        errors.append("sweep.alpha is required for radial sweeps")
    if mode == RADIAL_SWEEP and not dx_values:
        errors.append("sweep.dx is required for radial sweeps")
    if mode == LARMOR_SWEEP and not df_values:
        errors.append("sweep.df is required for larmor sweeps")
    if any(dx <= 0 for dx in dx_values):
        errors.append("sweep widths must be positive")
    if any(df <= 0 for df in df_values):
        errors.append("sweep.df values must be positive")
    if mode == TRANSMIT_SWEEP and "quadratic" in laws:
        for dx in dx_values:
            if abs(p * dx - 2.0 * sep) < 1e-12:
                errors.append(
                    f"sweep point dx={dx:g} sits on the evaluation-time singularity "
                    f"t(p,dk,K)=2mpdxK/(p^2-K^2 dk^2): p*dx == 2K")
    if x_i is not None and dx_values and abs(x_i) < sep * max(dx_values):
        errors.append("packet.x_i must satisfy |x_i| >= separation * dx for every sweep width")
    if errors:
        raise ConfigError(errors)
    return Scenario(mode=mode, prefix=prefix, potential=potential, p=p, c=c,
                    separation=sep, laws=laws, x_i=x_i, t=t,
                    dx_values=dx_values, alpha_values=alpha_values,
                    df_values=df_values, config_text=text)


_KNOWN_KEYS = {
    "scenario.mode",
    "potential.kind", "potential.omega", "potential.height",
    "potential.a", "potential.b", "potential.alpha",
    "packet.p", "packet.c", "packet.separation", "packet.x_i",
    "packet.dispersion",
    "time.t",
    "sweep.dx", "sweep.dx_log", "sweep.per_decade",
    "sweep.alpha", "sweep.df",
    "output.prefix",
}


def _read_pairs(text: str) -> tuple[dict[str, str], list[str]]:
    pairs: dict[str, str] = {}
    errors: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'section.key = value'")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key in pairs:
            errors.append(f"line {lineno}: duplicate key {key}")
        pairs[key] = value
    return pairs, errors


def _get_float(pairs, key, default, errors) -> float:
    if key not in pairs:
        return default
    try:
        return float(pairs[key])
    except ValueError:
        errors.append(f"{key}: not a number ({pairs[key]!r})")
        return default


def _parse_float_list(pairs, key, errors) -> tuple[float, ...]:
    if key not in pairs:
        return ()
    out = []
    for tok in pairs[key].split(","):
        try:
            out.append(float(tok))
        except ValueError:
            errors.append(f"{key}: not a number ({tok.strip()!r})")
    return tuple(out)


def _parse_sweep_dx(pairs, errors) -> tuple[float, ...]:
    explicit = _parse_float_list(pairs, "sweep.dx", errors)
    if "sweep.dx_log" not in pairs:
        return explicit
    span = _parse_float_list(pairs, "sweep.dx_log", errors)
    if len(span) != 2 or span[0] <= 0 or span[1] <= span[0]:
        errors.append("sweep.dx_log must be 'min,max' with 0 < min < max")
        return explicit
    per_decade = _get_float(pairs, "sweep.per_decade", 24.0, errors)
    lo, hi = math.log10(span[0]), math.log10(span[1])
    n = max(2, int(round((hi - lo) * per_decade)) + 1)
    swept = tuple(float(f"{v:.12g}") for v in np.logspace(lo, hi, n))
    return explicit + swept


def _parse_potential(pairs, mode, errors) -> PotentialSpec | None:
    kind = pairs.get("potential.kind")
    if kind is None:
        if mode in (TRANSMIT_SWEEP, REFLECT_SWEEP, LARMOR_SWEEP, SINGLE_SHOT):
            errors.append("potential.kind is required")
        return None
    try:
        if kind == "zero_range":
            return PotentialSpec.zero_range(_get_float(pairs, "potential.omega", 1.0, errors))
        if kind == "rectangular":
            return PotentialSpec.rectangular(
                _get_float(pairs, "potential.height", 0.0, errors),
                _get_float(pairs, "potential.a", 0.0, errors),
                _get_float(pairs, "potential.b", 1.0, errors))
        if kind == "radial":
            return PotentialSpec.radial(_get_float(pairs, "potential.alpha", 1.0, errors))
    except ValueError as exc:
        errors.append(str(exc))
        return None
    errors.append(f"potential.kind must be zero_range, rectangular or radial (got {kind!r})")
    return None


# ---------------------------------------------------------------------------
# sweep-point workers (top level so they cross process boundaries)

def _packet_for(scenario: Scenario, dx: float, law: str) -> PacketSpec:
    x_i = scenario.x_i if scenario.x_i is not None else -scenario.separation * dx
    return PacketSpec(p=scenario.p, dx=dx, x_i=x_i, dispersion=law,
                      c=scenario.c, separation=scenario.separation)


def _delay_point(scenario: Scenario, dx: float, law: str, grid_scale: float) -> dict:
    pot = scenario.potential
    omega = pot.omega if pot.kind == "zero_range" else 0.0
    base = {c: "" for c in DELAY_COLUMNS}
    base.update(status=STATUS_OK, dispersion=law, dx=dx,
                m_omega_dx=MASS * omega * dx,
                omega_over_c=omega / scenario.c, mc_over_p=MASS * scenario.c / scenario.p)
    if law == "quadratic" and scenario.mode == TRANSMIT_SWEEP \
            and scenario.p * dx <= 2.0 * scenario.separation:
        base["status"] = "skipped: p*dx <= 2K; no completed-event time exists"
        return base
    try:
        spec = _packet_for(scenario, dx, law)
        runner = (obs.delay_transmission if scenario.mode == TRANSMIT_SWEEP
                  else obs.delay_reflection)
        res = runner(spec, pot, t=scenario.t, grid_scale=grid_scale)
        check = runner(spec, pot, t=scenario.t, grid_scale=2.0 * grid_scale)
    except Exception as exc:  # precondition or synthesis failure: record, never drop
        base["status"] = f"skipped: {exc}"
        return base
    residual = abs(res.delay - check.delay)
    if residual > RESIDUAL_TOL:
        base["status"] = f"flagged: grid residual {residual:.3e} above {RESIDUAL_TOL:g}"
    filtering = 0.0
    if law == "quadratic" and pot.kind == "zero_range":
        if scenario.mode == TRANSMIT_SWEEP:
            filtering = res.asymptote - wv.asymptote_transmission_broad(spec.p, omega)
        else:
            filtering = (spec.velocity - obs._reflected_mean_velocity(
                obs._spectral_for(spec, res.t_eval, -1.0, 1.0), pot)) * res.t_eval
    base.update(t_eval=res.t_eval, delay=res.delay,
                delay_m_omega=MASS * omega * res.delay, asymptote=res.asymptote,
                filtering_term=filtering, norm=res.norm, com_real=res.com_real,
                com_spectral=res.com_spectral, residual=residual,
                completed=res.completed,
                m_omega_x_i=MASS * omega * spec.x_i,
                m_omega_ct=MASS * omega * scenario.c * res.t_eval)
    return base


def _radial_point(scenario: Scenario, alpha: float, dx: float, grid_scale: float) -> dict:
    base = {c: "" for c in RADIAL_COLUMNS}
    base.update(status=STATUS_OK, alpha=alpha, dx=dx)
    try:
        spec = _packet_for(scenario, dx, scenario.laws[0])
        res = obs.delay_radial(spec, alpha, t=scenario.t, grid_scale=grid_scale)
        check = obs.delay_radial(spec, alpha, t=scenario.t, grid_scale=2.0 * grid_scale)
    except Exception as exc:
        base["status"] = f"skipped: {exc}"
        return base
    residual = abs(res.delay - check.delay)
    if residual > RESIDUAL_TOL:
        base["status"] = f"flagged: grid residual {residual:.3e} above {RESIDUAL_TOL:g}"
    base.update(t_eval=res.t_eval, delay=res.delay, asymptote=res.asymptote,
                norm=res.norm, com_real=res.com_real, com_spectral=res.com_spectral,
                residual=residual, completed=res.completed)
    return base


def _larmor_point(scenario: Scenario, df: float, grid_scale: float) -> dict:
    base = {c: "" for c in LARMOR_COLUMNS}
    base.update(status=STATUS_OK, df=df)
    pot = scenario.potential
    n_lambda = int(lm.DEFAULT_N_LAMBDA * grid_scale)
    n_f = int(lm.DEFAULT_N_F * grid_scale)
    try:
        pointer = lm.PointerSpec(df=df)
        mean = lm.mean_pointer_reading(pointer, scenario.p, pot,
                                       n_lambda=n_lambda, n_f=n_f)
        check = lm.mean_pointer_reading(pointer, scenario.p, pot,
                                        n_lambda=2 * n_lambda, n_f=2 * n_f)
        tau = lm.complex_time(scenario.p, pot).value
        weight = lm.transmitted_weight(pointer, scenario.p, pot, n_lambda=n_lambda)
    except Exception as exc:
        base["status"] = f"skipped: {exc}"
        return base
    residual = abs(mean - check)
    if residual > RESIDUAL_TOL:
        base["status"] = f"flagged: grid residual {residual:.3e} above {RESIDUAL_TOL:g}"
    base.update(mean_reading=mean, re_tau=tau.real, im_tau=tau.imag,
                transmitted_weight=weight, residual=residual)
    return base


def _run_point(args) -> dict:
    kind, scenario, values, grid_scale = args
    if kind == "delay":
        return _delay_point(scenario, values[0], values[1], grid_scale)
    if kind == "radial":
        return _radial_point(scenario, values[0], values[1], grid_scale)
    return _larmor_point(scenario, values[0], grid_scale)


# ---------------------------------------------------------------------------
# scenario execution and output

@dataclass
class RunResult:
    rows: list[dict] = field(default_factory=list)
    columns: tuple[str, ...] = DELAY_COLUMNS
    channel: str = "transmitted"
    files: list[Path] = field(default_factory=list)

    @property
    def flagged(self) -> list[dict]:
        return [r for r in self.rows if str(r["status"]).startswith("flagged")]


def run_scenario(scenario: Scenario, out_dir: Path, grid_scale: float = 1.0,
                 jobs: int = 1, dump_waves: bool = False) -> RunResult:
    """Execute every sweep point, write the CSV table(s) and manifest.

    Sweep points run independently (optionally in a worker pool); output rows
    keep the input order regardless of completion order.  Skipped points are
    recorded with their reason, never silently dropped.  With ``dump_waves``,
    transmission/reflection scenarios also write the packet densities at one
    representative sweep width (``<prefix>_waves.csv``).
    """
    tasks, columns, channel = _build_tasks(scenario, grid_scale)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_point, tasks))
    else:
        rows = [_run_point(t) for t in tasks]
    result = RunResult(rows=rows, columns=columns, channel=channel)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = [out_dir / f"{scenario.prefix}_{channel}.csv"]
    _write_table(tables[0], scenario, columns, rows)
    if dump_waves and scenario.mode in (TRANSMIT_SWEEP, REFLECT_SWEEP, SINGLE_SHOT):
        wave_path = out_dir / f"{scenario.prefix}_waves.csv"
        _write_waves(wave_path, scenario, grid_scale)
        tables.append(wave_path)
    manifest = out_dir / f"{scenario.prefix}_manifest.json"
    _write_manifest(manifest, scenario, grid_scale, rows, tables)
    result.files = tables + [manifest]
    return result


DUMP_POINTS = 1537  # spatial samples per dumped density curve


def _write_waves(path: Path, scenario: Scenario, grid_scale: float) -> None:
    """Dump |psi|^2 curves for one representative sweep width.

    Transmission: initial free packet and the transmitted packet at the
    evaluation time.  Reflection (narrowest width): the reflected packet plus
    its narrow-packet limiting form, a one-sided exponential of decay 2*omega
    launched from the mirrored free-packet position.
    """
    law = scenario.laws[0]
    pot = scenario.potential
    if scenario.mode == REFLECT_SWEEP:
        dx = min(scenario.dx_values)
    else:
        dx = min(scenario.dx_values, key=lambda v: abs(v - 50.0))
    spec = _packet_for(scenario, dx, law)
    if scenario.mode == REFLECT_SWEEP:
        t = scenario.t if scenario.t is not None else prop.reflection_event_time(spec)
        window = prop.reflection_window(spec, pot, t, grid_scale)
        x = np.linspace(window[0], window[-1], DUMP_POINTS)
        spectral = obs._spectral_for(spec, t, x[0], x[-1], grid_scale)
        wave = prop.synthesize_reflected(spectral, pot, t, x=x)
        curves = {"x": x, "density_final": wave.density()}
        if pot.kind == "zero_range" and pot.omega > 0:
            mirror = -spec.x_i - spec.velocity * t
            u = x - mirror
            omega = pot.omega
            curves["density_limit"] = np.where(
                u >= 0.0, 2.0 * omega * np.exp(-2.0 * omega * np.clip(u, 0.0, None)), 0.0)
    else:
        t = scenario.t if scenario.t is not None else prop.completed_event_time(spec)
        window = prop.transmission_window(spec, pot, t, grid_scale)
        x = np.linspace(window[0], window[-1], DUMP_POINTS)
        spectral = obs._spectral_for(spec, t, x[0], x[-1], grid_scale)
        initial = prop.synthesize_free(spectral, 0.0, x=x)
        final = prop.synthesize_transmitted(spectral, pot, t, x=x)
        curves = {"x": x, "density_initial": initial.density(),
                  "density_final": final.density()}
    lines = [
        f"# zrdelay {__version__}",
        f"# schema: {SCHEMA_VERSION}",
        f"# scenario: {scenario.mode}",
        f"# config-sha256: {scenario.config_hash()}",
        f"# dump: waves dispersion={law} dx={_fmt(float(dx))} t={_fmt(float(t))}",
        ",".join(curves),
    ]
    stacked = list(curves.values())
    for i in range(x.size):
        lines.append(",".join(_fmt(float(col[i])) for col in stacked))
    path.write_text("\n".join(lines) + "\n")


def _build_tasks(scenario: Scenario, grid_scale: float):
    if scenario.mode in (TRANSMIT_SWEEP, REFLECT_SWEEP, SINGLE_SHOT):
        channel = "reflected" if scenario.mode == REFLECT_SWEEP else "transmitted"
        tasks = [("delay", scenario, (dx, law), grid_scale)
                 for law in scenario.laws for dx in scenario.dx_values]
        return tasks, DELAY_COLUMNS, channel
    if scenario.mode == RADIAL_SWEEP:
        tasks = [("radial", scenario, (alpha, dx), grid_scale)
                 for alpha in scenario.alpha_values for dx in scenario.dx_values]
        return tasks, RADIAL_COLUMNS, "radial"
    tasks = [("larmor", scenario, (df,), grid_scale) for df in scenario.df_values]
    return tasks, LARMOR_COLUMNS, "pointer"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value != value:
            return "nan"
        return f"{value:.12g}"
    # status messages may quote arbitrary exception text; keep rows parseable
    return str(value).replace(",", ";")


def _write_table(path: Path, scenario: Scenario, columns, rows) -> None:
    lines = [
        f"# zrdelay {__version__}",
        f"# schema: {SCHEMA_VERSION}",
        f"# scenario: {scenario.mode}",
        f"# config-sha256: {scenario.config_hash()}",
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(path: Path, scenario: Scenario, grid_scale: float,
                    rows, tables) -> None:
    pot = scenario.potential
    payload = {
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "mode": scenario.mode,
        "config_sha256": scenario.config_hash(),
        "grid_scale": grid_scale,
        "residual_tolerance": RESIDUAL_TOL,
        "potential": None if pot is None else asdict(pot),
        "packet": {"p": scenario.p, "c": scenario.c,
                   "separation": scenario.separation, "x_i": scenario.x_i,
                   "dispersion": list(scenario.laws)},
        "fixed_time": scenario.t,
        "sweep": {"dx": list(scenario.dx_values),
                  "alpha": list(scenario.alpha_values),
                  "df": list(scenario.df_values)},
        "rows": len(rows),
        "skipped": sum(1 for r in rows if str(r["status"]).startswith("skipped")),
        "flagged": sum(1 for r in rows if str(r["status"]).startswith("flagged")),
        "tables": [t.name for t in tables],
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
