"""Synthetic monostatic UWB pulse-response scans.

Each scan is a fast-time vector: a direct-path pulse anchored at bin 0,
a static set of clutter echoes fixed per scenario, an optional target
echo at the two-way delay of the target range, and white noise. The
target wiggles radially between successive slow-time scans (micro-motion
jitter), which is what a slow-time difference filter latches onto; the
clutter never moves.

The synthesized scan depends on the target's range only. Azimuth is
carried in ``TargetState`` purely for labeling, reproducing the inherent
left/right ambiguity of a single monostatic radar.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import LabeledDataset
from .labeling import (
    GRID10,
    SIMPLE4,
    Grid10Scheme,
    LabelScheme,
    Simple4Scheme,
    label_of,
)
from .seeding import make_rng, seed_sequence

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Placement defaults. Reflectivity and jitter are sized so a swaying
# person leaves a clear slow-time difference signature at 3 m.
DEFAULT_MIN_RANGE = 0.3  # m
DEFAULT_REFLECTIVITY = 4.0
DEFAULT_JITTER_SIGMA = 0.06  # m per-scan radial micro-motion

# Clutter echoes keep clear of the scan edges by this many pulse widths.
_CLUTTER_EDGE_SIGMAS = 6.0


@dataclass(frozen=True)
class Scenario:
    """Per-environment synthesis configuration.

    ``bin_duration_ps`` is the fast-time sampling step. Clutter amplitude
    and path count model multipath richness (higher indoors). The pulse
    is a Gaussian-modulated sinusoid; its center frequency and width are
    knobs because no specific hardware waveform is assumed.
    """

    scenario_id: str
    environment: str  # "indoor" | "outdoor"
    n_bins: int = 480
    bin_duration_ps: float = 61.0
    clutter_amplitude: float = 0.0
    clutter_path_count: int = 0
    noise_sigma: float = 0.0
    direct_path_amplitude: float = 1.0
    seed: int = 0
    pulse_center_freq_hz: float = 1.6e9
    pulse_sigma_ps: float = 600.0
    amplitude_exponent: float = 2.0  # echo amplitude = reflectivity / range**exponent

    def __post_init__(self):
        if self.environment not in ("indoor", "outdoor"):
            raise ValueError(f"environment must be indoor or outdoor, got {self.environment!r}")
        if self.n_bins < 64:
            raise ValueError("n_bins must be at least 64")
        if self.bin_duration_ps <= 0:
            raise ValueError("bin_duration_ps must be positive")
        if self.clutter_amplitude < 0 or self.clutter_path_count < 0:
            raise ValueError("clutter parameters must be nonnegative")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.direct_path_amplitude <= 0:
            raise ValueError("direct_path_amplitude must be positive")
        if self.pulse_center_freq_hz <= 0 or self.pulse_sigma_ps <= 0:
            raise ValueError("pulse parameters must be positive")

    @property
    def window_m(self) -> float:
        """One-way range spanned by the scan window."""
        return self.n_bins * self.bin_duration_ps * 1e-12 * SPEED_OF_LIGHT / 2.0

    @property
    def pulse_sigma_bins(self) -> float:
        return self.pulse_sigma_ps / self.bin_duration_ps

    @property
    def pulse_cycles_per_bin(self) -> float:
        return self.pulse_center_freq_hz * self.bin_duration_ps * 1e-12

    def delay_bins(self, range_m: float) -> float:
        """Two-way echo delay for a range, in (fractional) fast-time bins."""
        return 2.0 * range_m / SPEED_OF_LIGHT / (self.bin_duration_ps * 1e-12)


@dataclass(frozen=True)
class TargetState:
    range_m: float
    azimuth: float  # radians in [-pi/2, pi/2]; never observable in the scan
    reflectivity: float = DEFAULT_REFLECTIVITY
    jitter_sigma: float = 0.0  # meters of per-scan radial micro-motion

    def __post_init__(self):
        if self.range_m <= 0:
            raise ValueError("target range must be positive")
        if not (-np.pi / 2 <= self.azimuth <= np.pi / 2):
            raise ValueError("azimuth must lie in [-pi/2, pi/2]")
        if self.reflectivity <= 0:
            raise ValueError("reflectivity must be positive")
        if self.jitter_sigma < 0:
            raise ValueError("jitter_sigma must be nonnegative")


@dataclass
class RadarScan:
    samples: np.ndarray  # (n_bins,) float64, signed amplitude
    slow_time_index: int
    scenario_id: str


def pulse_samples(
    n_bins: int, center_bin: float, amplitude: float, sigma_bins: float, cycles_per_bin: float
) -> np.ndarray:
    """Gaussian-modulated sinusoid sampled on the fast-time grid.

    The carrier phase is zero at the pulse center, so the peak of the
    magnitude sits at the center bin.
    """
    t = np.arange(n_bins, dtype=np.float64) - center_bin
    return amplitude * np.exp(-0.5 * (t / sigma_bins) ** 2) * np.cos(2.0 * np.pi * cycles_per_bin * t)


_static_cache: dict[Scenario, np.ndarray] = {}


def _static_background(scenario: Scenario) -> np.ndarray:
    """Direct path plus clutter echoes; fixed for a scenario, never per-scan."""
    cached = _static_cache.get(scenario)
    if cached is not None:
        return cached
    background = pulse_samples(
        scenario.n_bins,
        0.0,
        scenario.direct_path_amplitude,
        scenario.pulse_sigma_bins,
        scenario.pulse_cycles_per_bin,
    )
    if scenario.clutter_path_count > 0 and scenario.clutter_amplitude > 0:
        rng = make_rng(scenario.seed, 0)
        margin = _CLUTTER_EDGE_SIGMAS * scenario.pulse_sigma_bins
        delays = rng.uniform(margin, scenario.n_bins - margin, scenario.clutter_path_count)
        amps = scenario.clutter_amplitude * rng.uniform(-1.0, 1.0, scenario.clutter_path_count)
        for delay, amp in zip(delays, amps):
            background += pulse_samples(
                scenario.n_bins, delay, amp, scenario.pulse_sigma_bins, scenario.pulse_cycles_per_bin
            )
    _static_cache[scenario] = background
    return background


def synthesize_scan(
    scenario: Scenario,
    target: Optional[TargetState],
    slow_time_index: int,
    rng: np.random.Generator,
) -> RadarScan:
    """One pulse-response scan; deterministic given the scenario and rng state.

    The target echo is centered at the two-way delay of the (jittered)
    range with amplitude reflectivity / range**exponent. Raises if the
    target's nominal echo delay falls outside the scan window.
    """
    if target is not None:
        if scenario.delay_bins(target.range_m) >= scenario.n_bins:
            raise ValueError(
                f"target at {target.range_m:.3f} m echoes beyond the "
                f"{scenario.window_m:.3f} m scan window"
            )
    samples = _static_background(scenario).copy()
    if target is not None:
        r = target.range_m
        if target.jitter_sigma > 0:
            r = r + rng.normal(0.0, target.jitter_sigma)
            r = max(r, 1e-3)
        samples += pulse_samples(
            scenario.n_bins,
            scenario.delay_bins(r),
            target.reflectivity / r**scenario.amplitude_exponent,
            scenario.pulse_sigma_bins,
            scenario.pulse_cycles_per_bin,
        )
    if scenario.noise_sigma > 0:
        samples += rng.normal(0.0, scenario.noise_sigma, scenario.n_bins)
    return RadarScan(samples=samples, slow_time_index=slow_time_index, scenario_id=scenario.scenario_id)


def place_target_for_label(
    label: int,
    scheme: LabelScheme,
    rng: np.random.Generator,
    *,
    reflectivity: float = DEFAULT_REFLECTIVITY,
    jitter_sigma: float = DEFAULT_JITTER_SIGMA,
    min_range: float = DEFAULT_MIN_RANGE,
) -> TargetState:
    """Uniform position inside the zone or cell owning ``label``.

    Round-trips by construction: labeling the returned target under the
    same scheme gives back ``label``. Label 0 means no target and is
    rejected here.
    """
    if label == 0:
        raise ValueError("label 0 means no target; nothing to place")
    if isinstance(scheme, Simple4Scheme):
        zones = {
            1: (min_range, scheme.r_high),
            2: (scheme.r_high, scheme.r_med),
            3: (scheme.r_med, scheme.r_low),
        }
        if label not in zones:
            raise ValueError(f"label {label} not valid for the {SIMPLE4} scheme")
        lo, hi = zones[label]
        if not lo < hi:
            raise ValueError("min_range must lie below the high-risk boundary")
        range_m = rng.uniform(lo, hi)
        azimuth = rng.uniform(-np.pi / 2, np.pi / 2)
    elif isinstance(scheme, Grid10Scheme):
        if not 1 <= label <= 9:
            raise ValueError(f"label {label} not valid for the {GRID10} scheme")
        row, col = divmod(label - 1, scheme.COLS)
        x_lo, x_hi, y_lo, y_hi = scheme.cell_bounds(row, col)
        x = rng.uniform(x_lo, x_hi)
        y = rng.uniform(y_lo, y_hi)
        range_m = float(np.hypot(x, y))
        azimuth = float(np.arctan2(y, x))
    else:
        raise TypeError(f"unknown labeling scheme: {scheme!r}")
    return TargetState(
        range_m=float(range_m),
        azimuth=float(azimuth),
        reflectivity=reflectivity,
        jitter_sigma=jitter_sigma,
    )


def generate_dataset(
    scenario: Scenario,
    scheme: LabelScheme,
    n_per_class: int,
    seed: int,
    *,
    reflectivity: float = DEFAULT_REFLECTIVITY,
    jitter_sigma: float = DEFAULT_JITTER_SIGMA,
    min_range: float = DEFAULT_MIN_RANGE,
) -> LabeledDataset:
    """Balanced raw dataset with a slow-time triple per example.

    For every example three consecutive scans (t-2, t-1, t) are
    synthesized from the same target placement; the trailing scan is the
    feature row and the two earlier ones go to ``history`` so the motion
    filter can be derived downstream. One child RNG stream per example,
    spawned from ``seed``, keeps generation deterministic and
    order-independent.
    """
    if n_per_class < 2:
        raise ValueError("n_per_class must be at least 2")
    n_classes = scheme.n_classes
    labels = np.repeat(np.arange(n_classes, dtype=np.int64), n_per_class)
    n_examples = labels.size
    scans = np.empty((n_examples, scenario.n_bins))
    history = np.empty((n_examples, 2, scenario.n_bins))
    children = seed_sequence(seed).spawn(n_examples)
    for i, label in enumerate(labels):
        rng = np.random.Generator(np.random.PCG64(children[i]))
        target = None
        if label:
            target = place_target_for_label(
                int(label),
                scheme,
                rng,
                reflectivity=reflectivity,
                jitter_sigma=jitter_sigma,
                min_range=min_range,
            )
        triple = [synthesize_scan(scenario, target, t, rng).samples for t in range(3)]
        history[i, 0] = triple[0]
        history[i, 1] = triple[1]
        scans[i] = triple[2]
    ds = LabeledDataset(
        scans=scans,
        labels=labels,
        scheme=scheme.kind,
        data_type="raw",
        scenario_id=scenario.scenario_id,
        history=history,
    )
    ds.validate_labels()
    return ds
