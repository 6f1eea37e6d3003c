"""Scenario JSON schema: strict loading with field-path error messages.

Every numeric field name carries its unit suffix. Unknown keys are rejected
so typos cannot silently fall back to defaults. Quantities may be given in
the reporting units (nm, fs-era pulse durations in ps) or directly in THz;
exactly one spelling per quantity is allowed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from .errors import ConfigError
from .fbg import FbgParams, SideLobe, bandwidth_b_from_fwhm_nm
from .osa import OsaParams
from .scenario import FilterSettings, GridSettings, Scenario, SourceParams
from .spectral import UnitContext, wavelength_to_frequency
from .wva import pulse_bandwidth


def _check_keys(section: Mapping[str, Any], allowed: set[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{path}: unknown key {key!r}")


def _section(doc: Mapping[str, Any], name: str, required: bool = True):
    value = doc.get(name)
    if value is None:
        if required:
            raise ConfigError(f"missing required section {name!r}")
        return None
    if not isinstance(value, Mapping):
        raise ConfigError(f"{name}: expected an object")
    return value


def _number(section: Mapping[str, Any], key: str, path: str, default=None) -> float:
    value = section.get(key, default)
    if value is None:
        raise ConfigError(f"{path}.{key}: required numeric field missing")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}: must be finite, got {value!r}")
    return float(value)


def _exactly_one(section: Mapping[str, Any], keys: tuple[str, ...], path: str) -> str:
    present = [k for k in keys if k in section]
    if len(present) != 1:
        raise ConfigError(f"{path}: give exactly one of {', '.join(keys)}")
    return present[0]


def _center_thz(section: Mapping[str, Any], path: str) -> float:
    key = _exactly_one(section, ("center_nm", "center_thz"), path)
    value = _number(section, key, path)
    if value <= 0:
        raise ConfigError(f"{path}.{key}: must be > 0")
    return wavelength_to_frequency(value) if key == "center_nm" else value


def _parse_source(section: Mapping[str, Any]) -> SourceParams:
    _check_keys(
        section,
        {"center_nm", "center_thz", "pulse_fwhm_ps", "bandwidth_thz", "fwhm_nm", "amplitude"},
        "source",
    )
    nu0 = _center_thz(section, "source")
    key = _exactly_one(section, ("pulse_fwhm_ps", "bandwidth_thz", "fwhm_nm"), "source")
    value = _number(section, key, "source")
    if value <= 0:
        raise ConfigError(f"source.{key}: must be > 0")
    if key == "pulse_fwhm_ps":
        b = pulse_bandwidth(value)
    elif key == "bandwidth_thz":
        b = value
    else:
        b = bandwidth_b_from_fwhm_nm(value, wavelength_to_frequency(nu0))
    amplitude = _number(section, "amplitude", "source", default=1.0)
    try:
        return SourceParams(nu0_thz=nu0, b_thz=b, amplitude=amplitude)
    except ValueError as exc:
        raise ConfigError(f"source: {exc}") from None


def _parse_side_lobe(section: Mapping[str, Any], path: str, main_b: float) -> SideLobe:
    _check_keys(section, {"offset_thz", "rel_amplitude", "width_thz"}, path)
    try:
        return SideLobe(
            offset_thz=_number(section, "offset_thz", path),
            rel_amplitude=_number(section, "rel_amplitude", path),
            width_thz=_number(section, "width_thz", path, default=main_b),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_fbg(section: Mapping[str, Any], path: str) -> FbgParams:
    _check_keys(
        section,
        {"center_nm", "center_thz", "kappa_nm_per_c", "fwhm_nm", "bandwidth_b_thz",
         "efficiency", "side_lobe"},
        path,
    )
    center = _center_thz(section, path)
    width_key = _exactly_one(section, ("fwhm_nm", "bandwidth_b_thz"), path)
    width = _number(section, width_key, path)
    if width <= 0:
        raise ConfigError(f"{path}.{width_key}: must be > 0")
    if width_key == "fwhm_nm":
        b = bandwidth_b_from_fwhm_nm(width, wavelength_to_frequency(center))
    else:
        b = width
    side = section.get("side_lobe")
    side_lobe = None
    if side is not None:
        if not isinstance(side, Mapping):
            raise ConfigError(f"{path}.side_lobe: expected an object")
        side_lobe = _parse_side_lobe(side, f"{path}.side_lobe", b)
    try:
        return FbgParams(
            center_ref_thz=center,
            kappa_nm_per_c=_number(section, "kappa_nm_per_c", path),
            bandwidth_b_thz=b,
            reflect_efficiency=_number(section, "efficiency", path, default=1.0),
            side_lobe=side_lobe,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_filter(section: Optional[Mapping[str, Any]]) -> FilterSettings:
    if section is None:
        return FilterSettings()
    _check_keys(
        section, {"enabled", "order", "half_width_factor", "half_width_thz"}, "filter"
    )
    enabled = section.get("enabled", True)
    if not isinstance(enabled, bool):
        raise ConfigError("filter.enabled: expected true/false")
    order = section.get("order", 4)
    if isinstance(order, bool) or not isinstance(order, int):
        raise ConfigError("filter.order: expected an integer")
    kwargs: dict[str, Any] = {"enabled": enabled, "order": order}
    if "half_width_factor" in section:
        kwargs["half_width_factor"] = _number(section, "half_width_factor", "filter")
    if "half_width_thz" in section:
        kwargs["half_width_thz"] = _number(section, "half_width_thz", "filter")
    try:
        return FilterSettings(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"filter: {exc}") from None


def _parse_grid(section: Optional[Mapping[str, Any]]) -> GridSettings:
    if section is None:
        return GridSettings()
    _check_keys(section, {"n_points", "span_factor", "center_thz", "span_thz"}, "grid")
    n_points = section.get("n_points", 4001)
    if isinstance(n_points, bool) or not isinstance(n_points, int):
        raise ConfigError("grid.n_points: expected an integer")
    kwargs: dict[str, Any] = {"n_points": n_points}
    if "span_factor" in section:
        kwargs["span_factor"] = _number(section, "span_factor", "grid")
    if "center_thz" in section:
        kwargs["center_thz"] = _number(section, "center_thz", "grid")
    if "span_thz" in section:
        kwargs["span_thz"] = _number(section, "span_thz", "grid")
    try:
        return GridSettings(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None


def _parse_osa(section: Optional[Mapping[str, Any]]) -> Optional[OsaParams]:
    if section is None:
        return None
    _check_keys(section, {"rbw_nm", "noise_floor", "rel_noise", "seed"}, "osa")
    seed = section.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("osa.seed: expected a non-negative integer")
    try:
        return OsaParams(
            rbw_nm=_number(section, "rbw_nm", "osa", default=0.0),
            noise_floor=_number(section, "noise_floor", "osa", default=0.0),
            rel_noise=_number(section, "rel_noise", "osa", default=0.0),
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"osa: {exc}") from None


@dataclass(frozen=True)
class BetaSpec:
    """Post-selection: a single angle, with optional sweep-range defaults."""

    beta_rad: float
    sweep_min_deg: Optional[float] = None
    sweep_max_deg: Optional[float] = None
    sweep_step_deg: Optional[float] = None


def _parse_postselect(section: Mapping[str, Any]) -> BetaSpec:
    _check_keys(
        section, {"beta_deg", "beta_min_deg", "beta_max_deg", "step_deg"}, "postselect"
    )
    sweep_keys = ("beta_min_deg", "beta_max_deg", "step_deg")
    has_sweep = any(k in section for k in sweep_keys)
    if has_sweep and not all(k in section for k in sweep_keys):
        raise ConfigError("postselect: sweep spec needs beta_min_deg, beta_max_deg and step_deg")
    if "beta_deg" not in section and not has_sweep:
        raise ConfigError("postselect: give beta_deg or a sweep spec")
    if has_sweep:
        lo = _number(section, "beta_min_deg", "postselect")
        hi = _number(section, "beta_max_deg", "postselect")
        step = _number(section, "step_deg", "postselect")
        if step <= 0 or hi <= lo:
            raise ConfigError("postselect: sweep needs step_deg > 0 and beta_max_deg > beta_min_deg")
        beta_deg = _number(section, "beta_deg", "postselect", default=lo)
        return BetaSpec(math.radians(beta_deg), lo, hi, step)
    return BetaSpec(math.radians(_number(section, "beta_deg", "postselect")))


@dataclass(frozen=True)
class LoadedScenario:
    """Scenario at the first configured temperature plus the full dt plan."""

    scenario: Scenario
    dt_list_c: list[float]
    beta: BetaSpec


def parse_scenario(doc: Mapping[str, Any]) -> LoadedScenario:
    if not isinstance(doc, Mapping):
        raise ConfigError("config root: expected an object")
    _check_keys(
        doc,
        {"reference_wavelength_nm", "source", "fbg1", "fbg2", "interferometer",
         "postselect", "temperatures", "filter", "grid", "osa"},
        "config root",
    )
    ref_nm = _number(doc, "reference_wavelength_nm", "config root", default=1551.0)
    try:
        units = UnitContext(reference_wavelength_nm=ref_nm)
    except ValueError as exc:
        raise ConfigError(f"reference_wavelength_nm: {exc}") from None

    source = _parse_source(_section(doc, "source"))
    fbg1 = _parse_fbg(_section(doc, "fbg1"), "fbg1")
    fbg2 = _parse_fbg(_section(doc, "fbg2"), "fbg2")

    interf = _section(doc, "interferometer", required=False) or {}
    _check_keys(interf, {"tau_ps", "phi_rad", "lcvr_rad"}, "interferometer")
    tau = _number(interf, "tau_ps", "interferometer", default=0.0)
    phi = _number(interf, "phi_rad", "interferometer", default=0.0)
    lcvr = _number(interf, "lcvr_rad", "interferometer", default=0.0)

    beta = _parse_postselect(_section(doc, "postselect"))

    temps = _section(doc, "temperatures")
    _check_keys(temps, {"t2_ref_c", "t1_list_c"}, "temperatures")
    t2 = _number(temps, "t2_ref_c", "temperatures")
    t1_list = temps.get("t1_list_c")
    if not isinstance(t1_list, list) or not t1_list:
        raise ConfigError("temperatures.t1_list_c: expected a non-empty list")
    t1_values = []
    for i, value in enumerate(t1_list):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"temperatures.t1_list_c[{i}]: expected a number")
        t1_values.append(float(value))

    scenario = Scenario(
        source=source,
        fbg1=fbg1,
        fbg2=fbg2,
        t1_c=t1_values[0],
        t2_c=t2,
        tau_ps=tau,
        phi_rad=phi,
        gamma_lcvr_rad=lcvr,
        beta_rad=beta.beta_rad,
        filter=_parse_filter(_section(doc, "filter", required=False)),
        grid=_parse_grid(_section(doc, "grid", required=False)),
        osa=_parse_osa(_section(doc, "osa", required=False)),
        units=units,
    )
    return LoadedScenario(
        scenario=scenario,
        dt_list_c=[t1 - t2 for t1 in t1_values],
        beta=beta,
    )


def load_scenario(path) -> LoadedScenario:
    """Parse a scenario config file; raises ConfigError with field paths."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    try:
        return parse_scenario(doc)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
