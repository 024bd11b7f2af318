"""Declarative experiment configuration.

Runs are described by an INI file (key-value pairs under named sections)
plus command-line overrides of the form ``section.key=value``, which take
precedence over file values; built-in defaults fill everything else.  The
fully resolved configuration is echoed into every run manifest, so a recipe
file plus the package version pins an experiment exactly.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError
from .system import NEUMANN, OUTFLOW, BoundarySpec

__all__ = ["ExperimentConfig", "load_config", "DEFAULTS"]

# schema: (section, key) -> (parser, default)
_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _parse_bool(s: str) -> bool:
    try:
        return _BOOL[s.strip().lower()]
    except KeyError:
        raise ConfigurationError(f"expected a boolean, got {s!r}") from None


def _parse_floats(s: str):
    return tuple(float(p) for p in s.replace(",", " ").split())


def _parse_omega(s: str) -> float:
    """Accept plain numbers and ``<mult>pi`` shorthand (e.g. ``10pi``)."""
    t = s.strip().lower()
    if t.endswith("pi"):
        return float(t[:-2] or "1") * math.pi
    return float(t)


_SCHEMA = {
    ("experiment", "discretization"): (str, "fd"),
    ("experiment", "dimension"): (int, 1),
    ("experiment", "poly_degree"): (int, 1),
    ("experiment", "flux"): (str, "central"),
    ("experiment", "resolution_constant"): (float, 10.0),
    ("experiment", "tol"): (float, 1e-6),
    ("experiment", "max_iters"): (int, 5000),
    ("frequency", "omega"): (_parse_omega, 10.0 * math.pi),
    ("frequency", "sweep_start"): (_parse_omega, None),
    ("frequency", "sweep_stop"): (_parse_omega, None),
    ("frequency", "sweep_count"): (int, 9),
    ("bc", "left"): (str, NEUMANN),
    ("bc", "right"): (str, OUTFLOW),
    ("bc", "bottom"): (str, NEUMANN),
    ("bc", "top"): (str, OUTFLOW),
    ("forcing", "preset"): (str, "gaussian-point-source"),
    ("forcing", "center"): (_parse_floats, None),
    ("initial", "preset"): (str, "zero"),
    ("time", "cfl"): (float, 0.5),
    ("time", "min_steps"): (int, 200),
    ("diagnostics", "spectrum"): (_parse_bool, False),
    ("diagnostics", "oracle_error"): (_parse_bool, False),
    ("diagnostics", "eigen_coefficients"): (_parse_bool, False),
    ("diagnostics", "dof_cap"): (int, 5000),
}


DEFAULTS = {key: default for key, (_, default) in _SCHEMA.items()}


@dataclass
class ExperimentConfig:
    """Fully resolved run description (defaults already applied)."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self._validate()

    def __getitem__(self, key):
        return self.values[key]

    def _validate(self):
        v = self.values
        if v[("experiment", "discretization")] not in ("fd", "dg"):
            raise ConfigurationError(
                f"discretization must be fd or dg, got {v[('experiment', 'discretization')]!r}"
            )
        if v[("experiment", "dimension")] not in (1, 2):
            raise ConfigurationError("dimension must be 1 or 2")
        if v[("experiment", "flux")] not in ("central", "upwind"):
            raise ConfigurationError("flux must be central or upwind")
        if v[("experiment", "poly_degree")] < 1:
            raise ConfigurationError("poly_degree must be >= 1")
        start, stop = v[("frequency", "sweep_start")], v[("frequency", "sweep_stop")]
        if (start is None) != (stop is None):
            raise ConfigurationError("sweep_start and sweep_stop must be given together")
        if start is not None and v[("frequency", "sweep_count")] < 2:
            raise ConfigurationError("sweeps need sweep_count >= 2")
        for side in ("left", "right", "bottom", "top"):
            if v[("bc", side)] not in (NEUMANN, OUTFLOW):
                raise ConfigurationError(f"unknown boundary condition {v[('bc', side)]!r}")
        from .presets import FORCING_PRESETS, INITIAL_PRESETS

        if v[("forcing", "preset")] not in FORCING_PRESETS:
            raise ConfigurationError(f"unknown forcing preset {v[('forcing', 'preset')]!r}")
        if v[("initial", "preset")] not in INITIAL_PRESETS:
            raise ConfigurationError(f"unknown initial preset {v[('initial', 'preset')]!r}")

    # convenience accessors -------------------------------------------------
    @property
    def dimension(self) -> int:
        return self[("experiment", "dimension")]

    @property
    def is_sweep(self) -> bool:
        return self[("frequency", "sweep_start")] is not None

    def omegas(self):
        import numpy as np

        if self.is_sweep:
            return list(
                np.linspace(
                    self[("frequency", "sweep_start")],
                    self[("frequency", "sweep_stop")],
                    self[("frequency", "sweep_count")],
                )
            )
        return [self[("frequency", "omega")]]

    def boundary_spec(self) -> BoundarySpec:
        v = self.values
        if self.dimension == 1:
            return BoundarySpec.one_d(v[("bc", "left")], v[("bc", "right")])
        return BoundarySpec.two_d(
            v[("bc", "left")], v[("bc", "right")], v[("bc", "bottom")], v[("bc", "top")]
        )

    def as_nested_dict(self) -> dict:
        """Section -> key -> value mapping for manifests (JSON-friendly)."""
        out: dict[str, dict] = {}
        for (section, key), value in sorted(self.values.items()):
            if isinstance(value, tuple):
                value = list(value)
            out.setdefault(section, {})[key] = value
        return out


def _apply(values: dict, section: str, key: str, raw: str, source: str):
    skey = (section, key)
    if skey not in _SCHEMA:
        raise ConfigurationError(f"unknown option [{section}] {key} (from {source})")
    parser, _ = _SCHEMA[skey]
    try:
        values[skey] = parser(raw)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for [{section}] {key}: {raw!r} ({exc})") from exc


def load_config(path=None, overrides=()) -> ExperimentConfig:
    """Defaults, overlaid by an INI file, overlaid by ``section.key=value`` pairs."""
    values = dict(DEFAULTS)
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        parser = configparser.ConfigParser()
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
        for section in parser.sections():
            for key, raw in parser.items(section):
                _apply(values, section, key, raw, str(path))
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"override must look like section.key=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        if "." not in dotted:
            raise ConfigurationError(f"override key must be section.key, got {dotted!r}")
        section, key = dotted.split(".", 1)
        _apply(values, section.strip(), key.strip(), raw.strip(), "command line")
    return ExperimentConfig(values=values)
