"""End-to-end interrogation pipeline: two gratings -> interferometer ->
post-selection -> measurement -> filtered centroid readout.

Shifts are reported in nm against the reference centroid measured once per
scenario at beta = -90 deg (which sees only the fixed-temperature grating).
Positive nm means longer wavelength; the frequency-domain sign flip happens
at the conversion boundary in UnitContext.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError
from .fbg import FbgParams, bragg_center
from .osa import OsaParams, osa_trace
from .spectral import (
    FrequencyGrid,
    Spectrum,
    UnitContext,
    centroid,
    frequency_to_wavelength,
    make_grid,
    super_gaussian_filter,
)
from .wva import PolarizedFieldSpectrum, SetupParams, amplification_factor, overlap_gamma, post_select

REFERENCE_BETA_RAD = -math.pi / 2


@dataclass(frozen=True)
class SourceParams:
    """Broad-band source: carrier frequency, power 1/e half-width, field scale."""

    nu0_thz: float
    b_thz: float
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if self.nu0_thz <= 0 or self.b_thz <= 0:
            raise ValueError("source nu0_thz and b_thz must be > 0")


@dataclass(frozen=True)
class FilterSettings:
    """Super-Gaussian filter applied to each measured spectrum.

    The half-width is half_width_factor times the wider grating's power 1/e
    half-width unless half_width_thz is given explicitly. The filter is
    centered per measurement on the main-lobe peak: the trace argmax within
    a window around the predicted Bragg centers, refined to sub-sample
    precision by log-parabolic interpolation.
    """

    enabled: bool = True
    order: int = 4
    half_width_factor: float = 1.5
    half_width_thz: Optional[float] = None

    def __post_init__(self) -> None:
        if self.order <= 0 or self.order % 2 != 0:
            raise ValueError(f"filter order must be positive even, got {self.order}")
        if self.half_width_factor <= 0:
            raise ValueError("half_width_factor must be > 0")
        if self.half_width_thz is not None and self.half_width_thz <= 0:
            raise ValueError("half_width_thz must be > 0")


@dataclass(frozen=True)
class GridSettings:
    """Discretization: defaults center on the gratings and span 10x their FWHM."""

    n_points: int = 4001
    span_factor: float = 10.0
    center_thz: Optional[float] = None
    span_thz: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")
        if self.span_factor <= 0:
            raise ValueError("span_factor must be > 0")
        if self.span_thz is not None and self.span_thz <= 0:
            raise ValueError("span_thz must be > 0")


@dataclass(frozen=True)
class Scenario:
    """Complete description of one interrogation experiment."""

    source: SourceParams
    fbg1: FbgParams
    fbg2: FbgParams
    t1_c: float
    t2_c: float
    tau_ps: float = 0.0
    phi_rad: float = 0.0
    gamma_lcvr_rad: float = 0.0
    beta_rad: float = 0.0
    filter: FilterSettings = field(default_factory=FilterSettings)
    grid: GridSettings = field(default_factory=GridSettings)
    osa: Optional[OsaParams] = None
    units: UnitContext = field(default_factory=UnitContext)

    def __post_init__(self) -> None:
        for name, f in (("fbg1", self.fbg1), ("fbg2", self.fbg2)):
            if f.bandwidth_b_thz >= self.source.b_thz:
                raise ConfigError(
                    f"{name} bandwidth {f.bandwidth_b_thz} THz must be smaller "
                    f"than the source bandwidth {self.source.b_thz} THz"
                )

    @property
    def delta_rad(self) -> float:
        return self.phi_rad - self.gamma_lcvr_rad


def scenario_grid(sc: Scenario) -> FrequencyGrid:
    center = sc.grid.center_thz
    if center is None:
        center = (sc.fbg1.center_ref_thz + sc.fbg2.center_ref_thz) / 2
    span = sc.grid.span_thz
    if span is None:
        span = sc.grid.span_factor * max(sc.fbg1.fwhm_thz, sc.fbg2.fwhm_thz)
    return make_grid(center, span, sc.grid.n_points)


def scenario_centers(sc: Scenario, t1_c: Optional[float] = None) -> tuple[float, float]:
    """Bragg centers (THz) of the sensing and reference gratings.

    The reference temperature for both is t2_c, so the second grating sits at
    its reference center.
    """
    t1 = sc.t1_c if t1_c is None else t1_c
    c1 = bragg_center(sc.fbg1, t1, sc.t2_c, sc.units)
    c2 = bragg_center(sc.fbg2, sc.t2_c, sc.t2_c, sc.units)
    return c1, c2


def scenario_setup_params(
    sc: Scenario, beta_rad: Optional[float] = None, t1_c: Optional[float] = None
) -> SetupParams:
    """Equivalent idealized interferometer parameters (side lobes ignored)."""
    c1, c2 = scenario_centers(sc, t1_c)
    b_eff = (sc.fbg1.bandwidth_b_thz + sc.fbg2.bandwidth_b_thz) / 2
    return SetupParams(
        nu0=sc.source.nu0_thz,
        b_width=b_eff,
        tau_ps=sc.tau_ps,
        phi_rad=sc.phi_rad,
        gamma_lcvr_rad=sc.gamma_lcvr_rad,
        beta_rad=sc.beta_rad if beta_rad is None else beta_rad,
        nu1=c1 - sc.source.nu0_thz,
        nu2=c2 - sc.source.nu0_thz,
        amplitude=sc.source.amplitude,
    )


def scenario_amplification(
    sc: Scenario, beta_rad: Optional[float] = None, t1_c: Optional[float] = None
) -> float:
    """Amplification factor at the scenario's overlap and residual phase."""
    c1, c2 = scenario_centers(sc, t1_c)
    b_eff = (sc.fbg1.bandwidth_b_thz + sc.fbg2.bandwidth_b_thz) / 2
    gamma = overlap_gamma((c1 - c2) / 2, b_eff)
    beta = sc.beta_rad if beta_rad is None else beta_rad
    return amplification_factor(beta, gamma, sc.delta_rad)


def scenario_field(
    sc: Scenario, t1_c: Optional[float] = None, g: Optional[FrequencyGrid] = None
) -> PolarizedFieldSpectrum:
    """Recombined field: each arm is the square root of its grating's
    reflected power spectrum (halved by the 45-degree pre-selection), with
    the delay/birefringence phase on the y arm."""
    from .fbg import reflect

    g = g or scenario_grid(sc)
    c1, c2 = scenario_centers(sc, t1_c)
    s1 = reflect(sc.fbg1, sc.source.b_thz, sc.source.nu0_thz, c1, g)
    s2 = reflect(sc.fbg2, sc.source.b_thz, sc.source.nu0_thz, c2, g)
    scale = sc.source.amplitude**2 / 2.0
    ex = np.sqrt(scale * s1.samples)
    nu = g.frequencies()
    ey = np.sqrt(scale * s2.samples) * np.exp(
        1j * (2.0 * math.pi * nu * sc.tau_ps + sc.delta_rad)
    )
    return PolarizedFieldSpectrum(grid=g, ex=ex, ey=ey)


def scenario_raw_spectrum(
    sc: Scenario,
    beta_rad: Optional[float] = None,
    t1_c: Optional[float] = None,
    g: Optional[FrequencyGrid] = None,
) -> Spectrum:
    """Ideal post-selected spectrum before any instrument effects."""
    beta = sc.beta_rad if beta_rad is None else beta_rad
    return post_select(scenario_field(sc, t1_c, g), beta)


def scenario_trace(
    sc: Scenario,
    beta_rad: Optional[float] = None,
    t1_c: Optional[float] = None,
    stream: Optional[int] = None,
    g: Optional[FrequencyGrid] = None,
) -> Spectrum:
    """Measured spectrum: the raw spectrum through the OSA model, if any."""
    raw = scenario_raw_spectrum(sc, beta_rad, t1_c, g)
    if sc.osa is None:
        return raw
    return osa_trace(raw, sc.osa, sc.units, stream=stream)


def _refine_peak(nu: np.ndarray, y: np.ndarray, i: int, spacing: float) -> float:
    """Log-parabolic sub-sample peak position around discrete argmax i.

    Exact for sampled Gaussians; falls back to the node position when the
    neighbors are unusable (edges, zeros, non-concave log samples).
    """
    if i == 0 or i == len(y) - 1:
        return float(nu[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    if y0 <= 0.0 or y1 <= 0.0 or y2 <= 0.0:
        return float(nu[i])
    l0, l1, l2 = math.log(y0), math.log(y1), math.log(y2)
    denom = l0 - 2.0 * l1 + l2
    if denom >= 0.0:
        return float(nu[i])
    shift = 0.5 * (l0 - l2) / denom
    shift = max(-0.5, min(0.5, shift))
    return float(nu[i] + shift * spacing)


def filter_center(sc: Scenario, trace: Spectrum, t1_c: Optional[float] = None) -> float:
    """Main-lobe peak of the measured spectrum, for centering the filter.

    The argmax search is restricted to a window around the predicted Bragg
    centers so a residual side lobe cannot capture the filter at strongly
    attenuating post-selection angles; the node argmax is then refined by
    log-parabolic interpolation to avoid grid-quantization bias in the
    filtered centroid.
    """
    c1, c2 = scenario_centers(sc, t1_c)
    w = max(sc.fbg1.bandwidth_b_thz, sc.fbg2.bandwidth_b_thz)
    lo, hi = min(c1, c2) - w, max(c1, c2) + w
    nu = trace.grid.frequencies()
    window = (nu >= lo) & (nu <= hi)
    if not np.any(window):
        window = np.ones_like(nu, dtype=bool)
    idx = np.flatnonzero(window)
    i = idx[int(np.argmax(trace.samples[idx]))]
    return _refine_peak(nu, trace.samples, int(i), trace.grid.spacing)


def apply_scenario_filter(
    sc: Scenario, trace: Spectrum, t1_c: Optional[float] = None
) -> Spectrum:
    """Super-Gaussian filter with scenario defaults; identity when disabled."""
    if not sc.filter.enabled:
        return trace
    half_width = sc.filter.half_width_thz
    if half_width is None:
        b = max(sc.fbg1.bandwidth_b_thz, sc.fbg2.bandwidth_b_thz)
        half_width = sc.filter.half_width_factor * b
    center = filter_center(sc, trace, t1_c)
    return super_gaussian_filter(trace, center, half_width, sc.filter.order)


@dataclass(frozen=True)
class InterrogationResult:
    """One measurement: spectra, referenced shift and effective amplification."""

    raw: Spectrum
    filtered: Spectrum
    centroid_thz: float
    centroid_nm_shift: float
    reference_thz: float
    reference_nm: float
    a_effective: float


def reference_centroid(sc: Scenario) -> float:
    """Centroid (THz) of the beta = -90 deg measurement of this scenario.

    Sees only the fixed-temperature grating; computed once per scenario
    (noise sub-stream 0) and shared by all sweep points.
    """
    trace = scenario_trace(sc, beta_rad=REFERENCE_BETA_RAD, stream=0)
    filtered = apply_scenario_filter(sc, trace)
    return centroid(filtered)


def simulate_interrogation(
    sc: Scenario,
    reference_thz: Optional[float] = None,
    stream: int = 1,
) -> InterrogationResult:
    """Full pipeline at the scenario's beta and t1.

    Builds both reflections, recombines and post-selects, applies the OSA
    model when configured, filters, and reports the centroid shift in nm
    against the beta = -90 deg reference centroid (computed here when not
    supplied). Propagates no-signal and singular-post-selection errors.
    """
    if reference_thz is None:
        reference_thz = reference_centroid(sc)
    trace = scenario_trace(sc, stream=stream)
    filtered = apply_scenario_filter(sc, trace)
    c = centroid(filtered)
    return InterrogationResult(
        raw=trace,
        filtered=filtered,
        centroid_thz=c,
        centroid_nm_shift=sc.units.frequency_shift_to_nm(c - reference_thz),
        reference_thz=reference_thz,
        reference_nm=frequency_to_wavelength(reference_thz),
        a_effective=scenario_amplification(sc),
    )


def sweep_temperature(
    sc: Scenario, dt_list: Sequence[float]
) -> list[tuple[float, InterrogationResult]]:
    """Interrogate at t1 = t2 + dt for each dt, sharing one reference."""
    ref = reference_centroid(sc)
    out = []
    for i, dt in enumerate(dt_list):
        point = replace(sc, t1_c=sc.t2_c + dt)
        out.append((float(dt), simulate_interrogation(point, ref, stream=i + 1)))
    return out


def sweep_beta(
    sc: Scenario, beta_rad_list: Sequence[float]
) -> list[tuple[float, Optional[InterrogationResult]]]:
    """Interrogate at each post-selection angle, sharing one reference.

    Dark-port and singular points are recorded as None rather than aborting
    the sweep.
    """
    from .errors import NoSignalError, SingularPostSelectionError

    ref = reference_centroid(sc)
    out: list[tuple[float, Optional[InterrogationResult]]] = []
    for i, beta in enumerate(beta_rad_list):
        point = replace(sc, beta_rad=float(beta))
        try:
            out.append((float(beta), simulate_interrogation(point, ref, stream=i + 1)))
        except (NoSignalError, SingularPostSelectionError):
            out.append((float(beta), None))
    return out
