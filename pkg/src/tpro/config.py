"""Run configuration: INI files, defaults, validation, canonical hashing.

A configuration file overlays the built-in defaults section by section.
Unknown sections or keys are rejected by name rather than ignored, so a
typo cannot silently fall back to a default.  The canonical INI rendering
is the hashing and round-trip format: parsing the canonical text
reproduces the configuration exactly.
"""

import configparser
import dataclasses
import hashlib
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import ADAPTIVE, FIXED_RK4, IntegratorOptions
from .errors import (
    ConfigConflictError,
    ConfigFileMissingError,
    ConfigSyntaxError,
    UnknownKeyError,
    ValueRangeError,
)
from .hybrid import (
    DrudeModel,
    FeedbackParams,
    HybridGeometry,
    SqdParams,
    feedback_parameters,
    isolated_feedback,
)
from .pulse import PulseParams

MODE_HYBRID = "hybrid"
MODE_ISOLATED = "isolated"

_GEOMETRY_VALUE_KEYS = ("radius_nm", "distance_nm", "n_max")

_KNOWN_KEYS = {
    "materials": ("eps_inf", "plasma_energy_ev", "damping_energy_ev", "eps_b"),
    "sqd": (
        "exciton_energy_ev",
        "binding_energy_ev",
        "gamma21_per_ps",
        "gamma32_per_ps",
        "mu21_enm",
        "mu32_enm",
        "eps_s",
    ),
    "geometry": ("mode",) + _GEOMETRY_VALUE_KEYS,
    "pulse": ("area_pi", "t0_ps", "delay_ps"),
    "integrator": ("method", "rel_tol", "abs_tol", "dt_ps", "n_samples"),
    "output": ("directory",),
}


def _get_float(parser, section, key, fallback):
    if not parser.has_option(section, key):
        return fallback
    raw = parser.get(section, key)
    try:
        return float(raw)
    except ValueError:
        raise ValueRangeError(
            f"[{section}] {key}: could not parse {raw!r} as a number"
        ) from None


def _get_int(parser, section, key, fallback):
    if not parser.has_option(section, key):
        return fallback
    raw = parser.get(section, key)
    try:
        return int(raw)
    except ValueError:
        raise ValueRangeError(
            f"[{section}] {key}: could not parse {raw!r} as an integer"
        ) from None


def _require(condition: bool, message: str):
    if not condition:
        raise ValueRangeError(message)


@dataclass(frozen=True)
class RunConfig:
    drude: DrudeModel
    eps_b: float
    sqd: SqdParams
    radius_nm: float
    distance_nm: float
    n_max: int
    isolated: bool
    area_pi: float
    t0_ps: float
    delay_ps: float | None  # None: six pulse widths, so the window starts at 0
    integrator: IntegratorOptions
    # where outputs land; not part of the scientific configuration, so it
    # is excluded from equality, the canonical form, and the hash
    output_dir: str = field(default=".", compare=False)
    # whether the geometry mode was stated explicitly (file or CLI); used
    # only for conflict detection, not part of the configuration value
    explicit_geometry: bool = field(default=False, compare=False)

    @classmethod
    def defaults(cls) -> "RunConfig":
        sqd = SqdParams()
        return cls(
            drude=DrudeModel(),
            eps_b=2.16,
            sqd=sqd,
            radius_nm=12.0,
            distance_nm=18.0,
            n_max=50,
            isolated=False,
            area_pi=9.0,
            t0_ps=20.0 / sqd.delta_b_radps,
            delay_ps=None,
            integrator=IntegratorOptions(),
            output_dir=".",
        )

    # -- derived objects ------------------------------------------------

    def geometry(self) -> HybridGeometry | None:
        if self.isolated:
            return None
        return HybridGeometry(
            radius_nm=self.radius_nm,
            distance_nm=self.distance_nm,
            eps_b=self.eps_b,
            drude=self.drude,
            n_max=self.n_max,
        )

    def feedback(self) -> FeedbackParams:
        geom = self.geometry()
        if geom is None:
            return isolated_feedback(self.sqd, self.eps_b)
        return feedback_parameters(geom, self.sqd, self.sqd.two_photon_carrier_radps)

    def pulse(self) -> PulseParams:
        delay = 6.0 * self.t0_ps if self.delay_ps is None else self.delay_ps
        return PulseParams(
            area_rad=self.area_pi * math.pi, t0_ps=self.t0_ps, delay_ps=delay
        )

    # -- parsing --------------------------------------------------------

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        p = Path(path)
        if not p.is_file():
            raise ConfigFileMissingError(f"configuration file not found: {p}")
        return cls.from_string(p.read_text(), source=str(p))

    @classmethod
    def from_string(cls, text: str, source: str = "<string>") -> "RunConfig":
        parser = configparser.ConfigParser(
            interpolation=None, inline_comment_prefixes=("#", ";")
        )
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigSyntaxError(f"{source}: {exc}") from exc

        for section in parser.sections():
            if section not in _KNOWN_KEYS:
                raise UnknownKeyError(f"{source}: unknown section [{section}]")
            for key in parser.options(section):
                if key not in _KNOWN_KEYS[section]:
                    raise UnknownKeyError(
                        f"{source}: unknown key {key!r} in section [{section}]"
                    )

        base = cls.defaults()
        try:
            drude = DrudeModel(
                eps_inf=_get_float(parser, "materials", "eps_inf", base.drude.eps_inf),
                plasma_energy_ev=_get_float(
                    parser, "materials", "plasma_energy_ev", base.drude.plasma_energy_ev
                ),
                damping_energy_ev=_get_float(
                    parser,
                    "materials",
                    "damping_energy_ev",
                    base.drude.damping_energy_ev,
                ),
            )
            sqd = SqdParams(
                exciton_energy_ev=_get_float(
                    parser, "sqd", "exciton_energy_ev", base.sqd.exciton_energy_ev
                ),
                binding_energy_ev=_get_float(
                    parser, "sqd", "binding_energy_ev", base.sqd.binding_energy_ev
                ),
                gamma21_per_ps=_get_float(
                    parser, "sqd", "gamma21_per_ps", base.sqd.gamma21_per_ps
                ),
                gamma32_per_ps=_get_float(
                    parser, "sqd", "gamma32_per_ps", base.sqd.gamma32_per_ps
                ),
                mu21_enm=_get_float(parser, "sqd", "mu21_enm", base.sqd.mu21_enm),
                mu32_enm=_get_float(parser, "sqd", "mu32_enm", base.sqd.mu32_enm),
                eps_s=_get_float(parser, "sqd", "eps_s", base.sqd.eps_s),
            )
        except ValueError as exc:
            raise ValueRangeError(f"{source}: {exc}") from exc

        eps_b = _get_float(parser, "materials", "eps_b", base.eps_b)
        _require(eps_b > 0.0, f"{source}: [materials] eps_b must be positive")

        isolated = base.isolated
        explicit_geometry = False
        radius_nm = base.radius_nm
        distance_nm = base.distance_nm
        n_max = base.n_max
        if parser.has_section("geometry"):
            explicit_geometry = True
            mode = parser.get("geometry", "mode", fallback=MODE_HYBRID).strip()
            if mode not in (MODE_HYBRID, MODE_ISOLATED):
                raise ValueRangeError(
                    f"{source}: [geometry] mode must be "
                    f"{MODE_HYBRID!r} or {MODE_ISOLATED!r}, got {mode!r}"
                )
            has_values = any(
                parser.has_option("geometry", k) for k in _GEOMETRY_VALUE_KEYS
            )
            if mode == MODE_ISOLATED:
                if has_values:
                    raise ConfigConflictError(
                        f"{source}: [geometry] mode = isolated conflicts with "
                        f"hybrid geometry keys in the same section"
                    )
                isolated = True
            else:
                isolated = False
                radius_nm = _get_float(parser, "geometry", "radius_nm", radius_nm)
                distance_nm = _get_float(parser, "geometry", "distance_nm", distance_nm)
                n_max = _get_int(parser, "geometry", "n_max", n_max)
                _require(
                    radius_nm > 0.0, f"{source}: [geometry] radius_nm must be positive"
                )
                _require(
                    distance_nm > radius_nm,
                    f"{source}: [geometry] distance_nm must exceed radius_nm",
                )
                _require(n_max >= 1, f"{source}: [geometry] n_max must be >= 1")

        area_pi = _get_float(parser, "pulse", "area_pi", base.area_pi)
        t0_ps = _get_float(parser, "pulse", "t0_ps", base.t0_ps)
        delay_ps = _get_float(parser, "pulse", "delay_ps", base.delay_ps)
        _require(area_pi >= 0.0, f"{source}: [pulse] area_pi must be >= 0")
        _require(t0_ps > 0.0, f"{source}: [pulse] t0_ps must be positive")

        method = parser.get(
            "integrator", "method", fallback=base.integrator.method
        ).strip()
        if method not in (ADAPTIVE, FIXED_RK4):
            raise ValueRangeError(
                f"{source}: [integrator] method must be {ADAPTIVE!r} or "
                f"{FIXED_RK4!r}, got {method!r}"
            )
        rel_tol = _get_float(parser, "integrator", "rel_tol", base.integrator.rel_tol)
        abs_tol = _get_float(parser, "integrator", "abs_tol", base.integrator.abs_tol)
        dt_ps = _get_float(parser, "integrator", "dt_ps", base.integrator.dt_ps)
        n_samples = _get_int(
            parser, "integrator", "n_samples", base.integrator.n_samples
        )
        _require(rel_tol > 0.0, f"{source}: [integrator] rel_tol must be positive")
        _require(abs_tol > 0.0, f"{source}: [integrator] abs_tol must be positive")
        _require(
            dt_ps is None or dt_ps > 0.0,
            f"{source}: [integrator] dt_ps must be positive",
        )
        _require(n_samples >= 2, f"{source}: [integrator] n_samples must be >= 2")

        output_dir = parser.get("output", "directory", fallback=base.output_dir)

        return cls(
            drude=drude,
            eps_b=eps_b,
            sqd=sqd,
            radius_nm=radius_nm,
            distance_nm=distance_nm,
            n_max=n_max,
            isolated=isolated,
            area_pi=area_pi,
            t0_ps=t0_ps,
            delay_ps=delay_ps,
            integrator=IntegratorOptions(
                method=method,
                rel_tol=rel_tol,
                abs_tol=abs_tol,
                dt_ps=dt_ps,
                n_samples=n_samples,
            ),
            output_dir=output_dir,
            explicit_geometry=explicit_geometry,
        )

    # -- overrides ------------------------------------------------------

    def with_overrides(
        self,
        area_pi: float | None = None,
        t0_ps: float | None = None,
        delay_ps: float | None = None,
        isolated: bool = False,
        method: str | None = None,
        output_dir: str | None = None,
    ) -> "RunConfig":
        cfg = self
        if isolated:
            if cfg.explicit_geometry and not cfg.isolated:
                raise ConfigConflictError(
                    "isolated mode requested, but the configuration "
                    "explicitly selects a hybrid geometry"
                )
            cfg = dataclasses.replace(cfg, isolated=True, explicit_geometry=True)
        if area_pi is not None:
            _require(area_pi >= 0.0, "area_pi must be >= 0")
            cfg = dataclasses.replace(cfg, area_pi=area_pi)
        if t0_ps is not None:
            _require(t0_ps > 0.0, "t0_ps must be positive")
            cfg = dataclasses.replace(cfg, t0_ps=t0_ps)
        if delay_ps is not None:
            cfg = dataclasses.replace(cfg, delay_ps=delay_ps)
        if method is not None:
            if method not in (ADAPTIVE, FIXED_RK4):
                raise ValueRangeError(
                    f"integrator method must be {ADAPTIVE!r} or {FIXED_RK4!r}"
                )
            cfg = dataclasses.replace(
                cfg, integrator=dataclasses.replace(cfg.integrator, method=method)
            )
        if output_dir is not None:
            cfg = dataclasses.replace(cfg, output_dir=output_dir)
        return cfg

    # -- canonical form -------------------------------------------------

    def canonical_ini(self) -> str:
        """Fully populated INI text; parsing it reproduces this config.

        The [output] section is deliberately omitted: two runs that differ
        only in output location are the same computation and share a hash.
        """
        parser = configparser.ConfigParser(interpolation=None)
        parser["materials"] = {
            "eps_inf": repr(self.drude.eps_inf),
            "plasma_energy_ev": repr(self.drude.plasma_energy_ev),
            "damping_energy_ev": repr(self.drude.damping_energy_ev),
            "eps_b": repr(self.eps_b),
        }
        parser["sqd"] = {
            "exciton_energy_ev": repr(self.sqd.exciton_energy_ev),
            "binding_energy_ev": repr(self.sqd.binding_energy_ev),
            "gamma21_per_ps": repr(self.sqd.gamma21_per_ps),
            "gamma32_per_ps": repr(self.sqd.gamma32_per_ps),
            "mu21_enm": repr(self.sqd.mu21_enm),
            "mu32_enm": repr(self.sqd.mu32_enm),
            "eps_s": repr(self.sqd.eps_s),
        }
        if self.isolated:
            parser["geometry"] = {"mode": MODE_ISOLATED}
        else:
            parser["geometry"] = {
                "mode": MODE_HYBRID,
                "radius_nm": repr(self.radius_nm),
                "distance_nm": repr(self.distance_nm),
                "n_max": repr(self.n_max),
            }
        pulse = {"area_pi": repr(self.area_pi), "t0_ps": repr(self.t0_ps)}
        if self.delay_ps is not None:
            pulse["delay_ps"] = repr(self.delay_ps)
        parser["pulse"] = pulse
        integ = {
            "method": self.integrator.method,
            "rel_tol": repr(self.integrator.rel_tol),
            "abs_tol": repr(self.integrator.abs_tol),
            "n_samples": repr(self.integrator.n_samples),
        }
        if self.integrator.dt_ps is not None:
            integ["dt_ps"] = repr(self.integrator.dt_ps)
        parser["integrator"] = integ
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_ini().encode("utf-8")).hexdigest()
