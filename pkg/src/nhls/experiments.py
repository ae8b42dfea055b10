"""Named, reproducible experiment scenarios.

Each scenario rebuilds one dynamical or spectral experiment with fixed
default parameters, runs it, writes CSV artifacts plus a resolved-config
``meta.json``, and grades a small set of metrics against recorded
thresholds. Identical configs produce identical CSV bytes.

Lead lengths are chosen by a travel-time budget so that no probability
reflected from an open end (or wrapped around a ring) re-enters a
measurement window before the run finishes; configs violating the budget
are rejected up front.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .analytic import band_overlap, band_overlap_numeric, overlap_curve, write_curve_csv
from .dynamics import (
    EvolutionRecord,
    Method,
    PropagatorConfig,
    gaussian_packet,
    propagate,
    quasi_coalescing_packets,
)
from .lattice import (
    Boundary,
    assemble,
    junction_spec,
    lead,
    ring_spec,
    sandwich_spec,
    ssh_segment,
)
from .observables import (
    RegionWindow,
    confinement_trace,
    eigenstate_iprs,
    interaction_complete_time,
    scatter_report,
    spectrum_reality,
    write_metrics_csv,
)
from .params import ModelParams
from .state import StateVector


class ConfigError(ValueError):
    """Unknown or invalid scenario configuration."""


class BudgetError(ConfigError):
    """The run outlives the travel-time budget of the chosen lattice."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    overrides: dict = field(default_factory=dict)
    output_dir: str | None = None


@dataclass(frozen=True)
class Check:
    """Threshold on one scalar metric: 'le', 'ge' or inclusive 'range'."""

    metric: str
    op: str
    lo: float | None = None
    hi: float | None = None

    def passes(self, value: float) -> bool:
        if self.op == "le":
            return value <= self.hi
        if self.op == "ge":
            return value >= self.lo
        if self.op == "range":
            return self.lo <= value <= self.hi
        raise ValueError(f"unknown op {self.op}")

    def describe(self) -> str:
        if self.op == "le":
            return f"<={self.hi:g}"
        if self.op == "ge":
            return f">={self.lo:g}"
        return f"[{self.lo:g},{self.hi:g}]"


@dataclass
class ScenarioResult:
    scenario_id: str
    resolved: dict
    metrics: dict
    summary: list  # (metric, value, threshold string, passed)
    passed: bool
    artifacts: dict


def _v_lead(p: ModelParams) -> float:
    return 2.0 * p.J


def _v_segment(p: ModelParams) -> float:
    return 2.0 * np.sqrt(p.J * p.strong_bond)


def _params(r: dict) -> ModelParams:
    return ModelParams(J=r["J"], delta=r["delta"], gamma=r["gamma"])


def _support(r: dict) -> float:
    return 4.0 / r["alpha"]


def _require_budget(t_max: float, limit: float, detail: str) -> None:
    if t_max > limit:
        raise BudgetError(
            f"t_max={t_max:g} exceeds the travel-time budget {limit:.1f} ({detail}); "
            "shorten the run or lengthen the leads"
        )


def _prop_cfg(r: dict) -> PropagatorConfig:
    stride = max(1, round(r["snapshot_every"] / r["dt"]))
    return PropagatorConfig(
        t_max=r["t_max"],
        dt=r["dt"],
        snapshot_stride=stride,
        method=Method(r["method"]),
    )


# --- scenario runners ---------------------------------------------------------

def _run_junction_scatter(r: dict) -> tuple[dict, dict]:
    p = _params(r)
    n_lead, n_seg = r["lead"], r["segment"]
    spec = junction_spec(n_lead, n_seg)
    transit = abs(r["n_c"]) / _v_lead(p) + (n_seg - _support(r)) / _v_segment(p)
    reflect = (abs(r["n_c"]) + n_lead - _support(r)) / _v_lead(p)
    _require_budget(r["t_max"], min(transit, reflect), "junction kinematics")
    H = assemble(spec, p)
    psi0 = gaussian_packet(r["alpha"], r["n_c"], r["k_c"], spec)
    rec = propagate(H, psi0, _prop_cfg(r))
    windows = {
        "reflect": RegionWindow(-n_lead, -1, "left_lead"),
        "transmit": RegionWindow(0, n_seg - 1, "segment_side"),
    }
    rep = scatter_report(rec, windows, t_final=rec.times[-1])
    metrics = {
        "transmitted_fraction": rep.transmitted,
        "reflected_fraction": rep.reflected,
        "gain_factor": rep.gain_factor,
        "train_width": float(rep.train_width),
        "t_final": rep.t_final,
    }
    return metrics, {"record": rec, "windows": windows}


def _sandwich_block(r: dict) -> tuple[list, int, int]:
    """Inner block segments, total block length, number of ssh sites."""
    if r.get("n_segments", 1) == 1:
        inner = [ssh_segment(r["segment"])]
    else:
        inner = []
        for i in range(r["n_segments"]):
            if i:
                inner.append(lead(r["spacer"]))
            inner.append(ssh_segment(r["segment"]))
    block = sum(s.length for s in inner)
    n_ssh = r.get("n_segments", 1) * r["segment"]
    return inner, block, n_ssh


def _run_sandwich_scatter(r: dict) -> tuple[dict, dict]:
    p = _params(r)
    inner, block, n_ssh = _sandwich_block(r)
    spec = sandwich_spec(r["lead"], inner, r["lead"])
    half = block // 2
    entry = (abs(r["n_c"]) - half) / _v_lead(p)
    cross = n_ssh / _v_segment(p) + (block - n_ssh) / _v_lead(p)
    transit = entry + cross + (r["lead"] - _support(r)) / _v_lead(p)
    reflect = entry + (r["lead"] - _support(r)) / _v_lead(p)
    _require_budget(r["t_max"], min(transit, reflect), "sandwich kinematics")
    H = assemble(spec, p)
    psi0 = gaussian_packet(r["alpha"], r["n_c"], r["k_c"], spec)
    rec = propagate(H, psi0, _prop_cfg(r))
    from_left = r["k_c"] < 0 or (r["k_c"] == 0 and r["n_c"] < 0)
    left = RegionWindow(-half - r["lead"], -half - 1, "left_lead")
    right = RegionWindow(block - half, block - half + r["lead"] - 1, "right_lead")
    center = RegionWindow(-half, block - half - 1, "block")
    windows = {
        "reflect": left if from_left else right,
        "transmit": right if from_left else left,
        "center": center,
    }
    interaction_complete_time(rec, center)  # raises if still interacting
    rep = scatter_report(rec, windows, t_final=rec.times[-1])
    metrics = {
        "transmitted_fraction": rep.transmitted,
        "reflected_fraction": rep.reflected,
        "remaining_fraction": rep.remaining,
        "gain_factor": rep.gain_factor,
        "train_width": float(rep.train_width),
        "train_lobes": float(rep.train_lobes),
        "t_final": rep.t_final,
    }
    return metrics, {"record": rec, "windows": windows}


def _run_ring_interference(r: dict) -> tuple[dict, dict]:
    p = _params(r)
    n_sites = r["ring_sites"]
    spec = ring_spec(n_sites)
    n_cells = n_sites // 2
    c_left_cell = r["center_left"] // 2
    c_right_cell = r["center_right"] // 2
    v_cell = np.sqrt(p.J * p.strong_bond)
    gap = abs(c_left_cell - c_right_cell)
    t_meet = gap / (2 * v_cell)
    t_second = t_meet + n_cells / (2 * v_cell)
    _require_budget(r["t_max"], 0.95 * t_second, "ring re-meeting")
    H = assemble(spec, p)
    psi_L, _ = quasi_coalescing_packets(H, r["width"], r["center_left"])
    _, psi_R = quasi_coalescing_packets(H, r["width"], r["center_right"])
    sign = +1.0 if r["relative_phase"] == "plus" else -1.0
    psi0 = StateVector((psi_L.amps + sign * psi_R.amps) / np.sqrt(2), 0, spec)
    rec = propagate(H, psi0, _prop_cfg(r))
    dens = rec.density()
    peak = dens.max(axis=1)
    base_sel = (rec.times >= 0.15 * t_meet) & (rec.times <= 0.7 * t_meet)
    base = float(np.median(peak[base_sel]))
    norm_ratio = rec.norms / rec.norms[0]
    metrics = {
        "peak_ratio": float(peak.max() / base),
        "t_peak": float(rec.times[int(np.argmax(peak))]),
        "t_meet_predicted": float(t_meet),
        "min_norm_ratio": float(norm_ratio.min()),
        "final_norm_ratio": float(norm_ratio[-1]),
        "packet_overlap": float(abs(np.vdot(psi_L.amps, psi_R.amps))),
    }
    return metrics, {"record": rec, "windows": {}}


def _run_confinement(r: dict) -> tuple[dict, dict]:
    p = _params(r)
    n_lead, n_seg = r["lead"], r["segment"]
    spec = junction_spec(n_lead, n_seg)
    leak_return = (abs(r["n_c"]) - _support(r)) / _v_lead(p) + 2 * n_lead / _v_lead(p)
    _require_budget(r["t_max"], leak_return, "lead round trip of leaked probability")
    H = assemble(spec, p)
    psi0 = gaussian_packet(r["alpha"], r["n_c"], r["k_c"], spec)
    rec = propagate(H, psi0, _prop_cfg(r))
    segment = RegionWindow(0, n_seg - 1, "segment")
    trace = confinement_trace(rec, segment)
    period_pred = 2 * n_seg / _v_segment(p)
    retention = trace.envelope_retention(3.0)
    leak = trace.leakage_per_period(rec.norms)
    metrics = {
        "envelope_retention": float("nan") if retention is None else retention,
        "bounce_period": float("nan") if trace.bounce_period is None else trace.bounce_period,
        "period_predicted": period_pred,
        "period_rel_err": float("nan")
        if trace.bounce_period is None
        else abs(trace.bounce_period - period_pred) / period_pred,
        "entry_time": float("nan") if trace.entry_time is None else trace.entry_time,
        "leakage_per_period": float("nan") if leak is None else leak,
        "absorption_ratio": float(rec.norms[-1] / rec.norms[0]),
        "segment_prob_max": float(trace.probability.max()),
    }
    return metrics, {"record": rec, "windows": {"segment": segment}, "trace": trace}


def _run_spectrum_pair(r: dict) -> tuple[dict, dict]:
    p = _params(r)
    metrics = {}
    extra = {"spectra": {}}
    for n_side in (r["half_size"], 2 * r["half_size"]):
        spec = junction_spec(n_side, n_side, boundary=Boundary.RING)
        H = assemble(spec, p)
        report = spectrum_reality(H)
        iprs = eigenstate_iprs(H)
        total = 2 * n_side
        metrics[f"max_imag_{total}"] = report.max_imag
        metrics[f"max_ipr_{total}"] = float(iprs.max())
        extra["spectra"][total] = (report.eigenvalues, iprs)
    small, big = 2 * r["half_size"], 4 * r["half_size"]
    metrics["ipr_ratio"] = metrics[f"max_ipr_{big}"] / metrics[f"max_ipr_{small}"]
    return metrics, extra


def _run_overlap_curves(r: dict) -> tuple[dict, dict]:
    k = np.linspace(-np.pi, np.pi, r["k_samples"])
    gammas = r["gammas"]
    curves = {}
    worst = 0.0
    for g in gammas:
        p = ModelParams(J=r["J"], delta=r["delta"], gamma=g)
        curve = overlap_curve(k, p)
        curves[g] = curve
        numeric = np.array([band_overlap_numeric(ki, p) for ki in k])
        worst = max(worst, float(np.max(np.abs(curve.values - numeric))))
    p_ep = ModelParams(J=r["J"], delta=r["delta"], gamma=1 + r["delta"] - r["J"])
    metrics = {
        "max_formula_vs_numeric": worst,
        "overlap_k0_ep_deviation": abs(float(band_overlap(0.0, p_ep)) - 1.0),
    }
    return metrics, {"curves": curves}


# --- registry -----------------------------------------------------------------

_COMMON = {"J": 1.0, "delta": 0.5, "alpha": 0.04, "dt": 0.01,
           "snapshot_every": 1.0, "method": "stepped"}


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    description: str
    defaults: dict
    runner: object
    checks: tuple
    density_every: int = 2


SCENARIOS: dict[str, Scenario] = {}


def _register(s: Scenario) -> None:
    SCENARIOS[s.scenario_id] = s


_register(Scenario(
    "fig3a",
    "junction, no gain/loss: total reflection of a zero-energy packet",
    {**_COMMON, "gamma": 0.0, "lead": 600, "segment": 600,
     "n_c": -300, "k_c": -np.pi / 2, "t_max": 300.0},
    _run_junction_scatter,
    (Check("transmitted_fraction", "le", hi=0.01),),
))

_register(Scenario(
    "fig3b",
    "junction at the coalescence point: reflectionless transmission",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 600,
     "n_c": -300, "k_c": -np.pi / 2, "t_max": 300.0},
    _run_junction_scatter,
    (Check("transmitted_fraction", "ge", lo=0.98),
     Check("reflected_fraction", "le", hi=0.01),
     Check("gain_factor", "range", lo=0.98, hi=1.02)),
))

_register(Scenario(
    "fig3c",
    "junction with reversed gain/loss: amplified transmission and reflection",
    {**_COMMON, "gamma": -0.5, "lead": 600, "segment": 600,
     "n_c": -300, "k_c": -np.pi / 2, "t_max": 300.0},
    _run_junction_scatter,
    (Check("gain_factor", "ge", lo=1.5),
     Check("transmitted_fraction", "ge", lo=0.05),
     Check("reflected_fraction", "ge", lo=0.05)),
))

_register(Scenario(
    "fig4a",
    "embedded segment, left incidence: transparency",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 150,
     "n_c": -200, "k_c": -np.pi / 2, "t_max": 280.0},
    _run_sandwich_scatter,
    (Check("transmitted_fraction", "ge", lo=0.98),
     Check("gain_factor", "range", lo=0.98, hi=1.02)),
))

_register(Scenario(
    "fig4b",
    "embedded segment, right incidence: amplified reflected wave train",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 150,
     "n_c": 200, "k_c": np.pi / 2, "t_max": 280.0},
    _run_sandwich_scatter,
    (Check("train_width", "range", lo=240, hi=360),
     Check("gain_factor", "ge", lo=2.0)),
))

_register(Scenario(
    "fig4c",
    "three-segment stack, left incidence: transparency",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 50, "n_segments": 3,
     "spacer": 40, "n_c": -300, "k_c": -np.pi / 2, "t_max": 340.0},
    _run_sandwich_scatter,
    (Check("transmitted_fraction", "ge", lo=0.95),
     Check("gain_factor", "range", lo=0.95, hi=1.05)),
))

_register(Scenario(
    "fig4d",
    "three-segment stack, right incidence: amplified reflection",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 50, "n_segments": 3,
     "spacer": 40, "n_c": 300, "k_c": np.pi / 2, "t_max": 340.0},
    _run_sandwich_scatter,
    (Check("gain_factor", "ge", lo=1.5),),
))

_register(Scenario(
    "fig5c",
    "ring at the coalescence point: constructive meeting of two packets",
    {"J": 1.0, "delta": 0.5, "gamma": 0.5, "dt": 0.01, "snapshot_every": 1.0,
     "method": "stepped", "ring_sites": 1000, "width": 50,
     "center_left": 700, "center_right": 300, "relative_phase": "plus",
     "t_max": 170.0},
    _run_ring_interference,
    (Check("peak_ratio", "ge", lo=3.0),),
))

_register(Scenario(
    "fig5d",
    "ring at the coalescence point: destructive meeting (cancellation)",
    {"J": 1.0, "delta": 0.5, "gamma": 0.5, "dt": 0.01, "snapshot_every": 1.0,
     "method": "stepped", "ring_sites": 1000, "width": 50,
     "center_left": 700, "center_right": 300, "relative_phase": "minus",
     "t_max": 170.0},
    _run_ring_interference,
    (Check("min_norm_ratio", "le", hi=0.1),),
))

_register(Scenario(
    "fig6a",
    "terminal segment much longer than the packet: coherent confinement",
    {**_COMMON, "gamma": 0.5, "lead": 1300, "segment": 400,
     "n_c": -400, "k_c": -np.pi / 2, "t_max": 1400.0, "dt": 0.02,
     "snapshot_every": 2.0},
    _run_confinement,
    (Check("envelope_retention", "ge", lo=0.8),
     Check("period_rel_err", "le", hi=0.15),
     Check("leakage_per_period", "le", hi=0.05)),
    density_every=10,
))

_register(Scenario(
    "fig6b",
    "terminal segment comparable to the packet: reduced confinement",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 60,
     "n_c": -400, "k_c": -np.pi / 2, "t_max": 600.0},
    _run_confinement,
    (Check("envelope_retention", "le", hi=0.6),),
    density_every=4,
))

_register(Scenario(
    "fig6c",
    "terminal segment matching the packet width: perfect absorption",
    {**_COMMON, "gamma": 0.5, "lead": 600, "segment": 30,
     "n_c": -400, "k_c": -np.pi / 2, "t_max": 450.0},
    _run_confinement,
    (Check("absorption_ratio", "le", hi=0.05),),
    density_every=4,
))

_register(Scenario(
    "figA",
    "periodic junction spectra at two sizes: reality and delocalization",
    {"J": 1.0, "delta": 0.5, "gamma": 0.5, "half_size": 250},
    _run_spectrum_pair,
    (Check("max_imag_500", "le", hi=1e-8),
     Check("max_imag_1000", "le", hi=1e-8),
     Check("ipr_ratio", "le", hi=1.0)),
))

_register(Scenario(
    "figA2",
    "cross-band overlap curves: closed form versus numerical eigenvectors",
    {"J": 1.0, "delta": 0.5, "gammas": (0.1, 0.3, 0.5), "k_samples": 200},
    _run_overlap_curves,
    (Check("max_formula_vs_numeric", "le", hi=1e-10),
     Check("overlap_k0_ep_deviation", "le", hi=0.0)),
))


def scenario_ids() -> list[str]:
    return list(SCENARIOS)


def resolve_config(cfg: ScenarioConfig) -> tuple[Scenario, dict]:
    try:
        scenario = SCENARIOS[cfg.scenario_id]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {cfg.scenario_id!r}; known: {', '.join(SCENARIOS)}"
        ) from None
    resolved = dict(scenario.defaults)
    for key, value in cfg.overrides.items():
        if key not in resolved:
            raise ConfigError(
                f"scenario {cfg.scenario_id!r} has no parameter {key!r}; "
                f"settable: {', '.join(sorted(resolved))}"
            )
        default = resolved[key]
        try:
            if isinstance(default, bool):
                value = bool(value)
            elif isinstance(default, int) and not isinstance(default, bool):
                value = int(value)
            elif isinstance(default, float):
                value = float(value)
            elif isinstance(default, (tuple, list)):
                value = tuple(float(v) for v in value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
        resolved[key] = value
    return scenario, resolved


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Run one scenario, write artifacts if an output dir is set, grade it."""
    scenario, resolved = resolve_config(cfg)
    metrics, extra = scenario.runner(resolved)
    summary = []
    passed = True
    for check in scenario.checks:
        value = metrics[check.metric]
        ok = bool(check.passes(value)) and np.isfinite(value)
        passed = passed and ok
        summary.append((check.metric, value, check.describe(), ok))
    artifacts: dict[str, str] = {}
    if cfg.output_dir is not None:
        artifacts = _write_artifacts(cfg, scenario, resolved, metrics, summary, extra)
    return ScenarioResult(cfg.scenario_id, resolved, metrics, summary, passed, artifacts)


def _downsample(rec: EvolutionRecord, every: int) -> EvolutionRecord:
    if every <= 1:
        return rec
    sub = EvolutionRecord(
        rec.times[::every], rec.snapshots[::every], rec.origin, rec.lattice
    )
    return sub


def _write_artifacts(cfg, scenario, resolved, metrics, summary, extra) -> dict:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = {}

    rec = extra.get("record")
    if rec is not None:
        density_path = out / "density.csv"
        _downsample(rec, scenario.density_every).write_density_csv(density_path)
        norms_path = out / "norms.csv"
        rec.write_norms_csv(norms_path, extra.get("windows") or None)
        artifacts["density"] = str(density_path)
        artifacts["norms"] = str(norms_path)
    for total, (eigs, iprs) in extra.get("spectra", {}).items():
        path = out / f"spectrum_{total}.csv"
        with open(path, "w") as fh:
            fh.write("n,re,im,ipr\n")
            for i, (e, p) in enumerate(zip(eigs, iprs)):
                fh.write(f"{i},{e.real:.17g},{e.imag:.17g},{p:.17g}\n")
        artifacts[f"spectrum_{total}"] = str(path)
    for g, curve in extra.get("curves", {}).items():
        path = out / f"overlap_gamma_{g:g}.csv"
        write_curve_csv(path, curve.k, curve.values)
        artifacts[f"overlap_gamma_{g:g}"] = str(path)

    summary_path = out / "summary.csv"
    with open(summary_path, "w") as fh:
        fh.write("metric,value,threshold,pass\n")
        for metric, value, thr, ok in summary:
            fh.write(f"{metric},{value:.12g},{thr},{str(ok).lower()}\n")
    artifacts["summary"] = str(summary_path)

    metrics_path = out / "metrics.csv"
    write_metrics_csv(metrics_path, cfg.scenario_id, metrics)
    artifacts["metrics"] = str(metrics_path)

    meta = {
        "scenario": cfg.scenario_id,
        "description": scenario.description,
        "resolved_config": {
            k: (list(v) if isinstance(v, tuple) else v) for k, v in resolved.items()
        },
        "package_version": __version__,
        "kernel_backend": kernels.backend_name(),
    }
    meta_path = out / "meta.json"
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    artifacts["meta"] = str(meta_path)
    return artifacts


# --- suite --------------------------------------------------------------------

def _run_one(args) -> ScenarioResult:
    sid, overrides, out_root = args
    out = None if out_root is None else str(Path(out_root) / sid)
    return run_scenario(ScenarioConfig(sid, overrides or {}, out))


def cross_checks(results: dict[str, ScenarioResult]) -> list[tuple[str, bool, str]]:
    """Relations between scenarios that no single run can grade."""
    out = []
    if "fig6a" in results and "fig6b" in results:
        a = results["fig6a"].metrics["envelope_retention"]
        b = results["fig6b"].metrics["envelope_retention"]
        out.append(
            ("fig6b_confinement_below_fig6a", bool(b < a), f"{b:.4f} < {a:.4f}")
        )
    return out


@dataclass
class SuiteResult:
    results: dict
    extra_checks: list
    passed: bool


def run_suite(
    filter_ids: list[str] | None = None,
    workers: int = 1,
    output_dir: str | None = None,
    overrides: dict | None = None,
) -> SuiteResult:
    ids = list(filter_ids) if filter_ids else scenario_ids()
    unknown = [i for i in ids if i not in SCENARIOS]
    if unknown:
        raise ConfigError(f"unknown scenarios: {', '.join(unknown)}")
    jobs = [(sid, overrides, output_dir) for sid in ids]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = {r.scenario_id: r for r in pool.map(_run_one, jobs)}
    else:
        results = {sid: _run_one(job) for sid, job in zip(ids, jobs)}
    extras = cross_checks(results)
    passed = all(r.passed for r in results.values()) and all(ok for _, ok, _ in extras)
    if output_dir is not None:
        _write_junit(Path(output_dir) / "suite.xml", results, extras)
    return SuiteResult(results, extras, passed)


def _write_junit(path: Path, results: dict, extras: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    n_fail = sum(not r.passed for r in results.values()) + sum(
        not ok for _, ok, _ in extras
    )
    lines = [
        '<?xml version="1.0" encoding="utf-8"?>',
        f'<testsuite name="nhls-scenarios" tests="{len(results) + len(extras)}" '
        f'failures="{n_fail}">',
    ]
    for sid, r in results.items():
        if r.passed:
            lines.append(f'  <testcase name="{sid}"/>')
        else:
            failed = [
                f"{m}={v:.6g} (want {thr})" for m, v, thr, ok in r.summary if not ok
            ]
            lines.append(f'  <testcase name="{sid}">')
            lines.append(f'    <failure message="{"; ".join(failed)}"/>')
            lines.append("  </testcase>")
    for name, ok, detail in extras:
        if ok:
            lines.append(f'  <testcase name="{name}"/>')
        else:
            lines.append(f'  <testcase name="{name}">')
            lines.append(f'    <failure message="{detail}"/>')
            lines.append("  </testcase>")
    lines.append("</testsuite>")
    path.write_text("\n".join(lines) + "\n")
