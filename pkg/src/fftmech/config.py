"""Run configuration: flat key=value sections, strict about unknown keys.

Grammar (INI subset, parsed with configparser):

    [run]
    scheme      = continuum | centered | forward_backward | rotated
    algorithm   = direct | accelerated
    chi         = float >= 0
    loading     = 11 | 22 | 33 | 23 | 13 | 12
    reference   = default | optimize | <E0 float at nu0 = 0.25>
    beta        = float          (direct default-reference coefficient)
    tolerance   = float          (eta target; 0 disables)
    stagnation  = float          (per-voxel max-change threshold)
    cap         = int
    output      = directory
    seed        = int            (generator seed where applicable)

    [generator]
    kind     = square | cube | sphere_array | boolean_spheres | file
    size     = int               (voxels per side)
    dim      = 2 | 3             (sphere_array / boolean_spheres only)
    fraction = float             (sphere_array)
    count    = int               (boolean_spheres)
    diameter = float             (boolean_spheres, voxels)
    path     = existing grid dump (kind = file)

    [render]                      (optional)
    component = stress component name, e.g. 12
    axis      = 0 | 1 | 2
    offset    = float             (slice coordinate in [-1/2, 1/2))
    clamp     = lo,hi
    colormap  = bgyr
    window    = lo,hi             (optional square crop in domain coords)

Unknown keys or sections are rejected with the offending path in the message.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .green import Scheme
from .solve import Algorithm

_RUN_KEYS = {"scheme", "algorithm", "chi", "loading", "reference", "beta",
             "tolerance", "stagnation", "cap", "output", "seed"}
_GEN_KEYS = {"kind", "size", "dim", "fraction", "count", "diameter", "path"}
_RENDER_KEYS = {"component", "axis", "offset", "clamp", "colormap", "window"}

_SCHEMES = {s.value: s for s in Scheme}
_ALGORITHMS = {a.value: a for a in Algorithm}


class ConfigError(ValueError):
    pass


@dataclass
class RenderSpec:
    component: str = "12"
    axis: int = 2
    offset: float = 0.0
    clamp: tuple[float, float] = (0.0, 1.0)
    colormap: str = "bgyr"
    window: tuple[float, float] | None = None

    def __post_init__(self):
        lo, hi = self.clamp
        if not lo < hi:
            raise ConfigError(f"clamp range must have lo < hi, got {self.clamp}")


@dataclass
class GeneratorSpec:
    kind: str = "square"
    size: int = 16
    dim: int = 3
    fraction: float = 0.2
    count: int = 0
    diameter: float = 5.0
    path: str = ""

    @property
    def grid_dim(self) -> int:
        if self.kind == "square":
            return 2
        if self.kind == "cube":
            return 3
        return self.dim


@dataclass
class RunConfig:
    scheme: Scheme = Scheme.ROTATED
    algorithm: Algorithm = Algorithm.ACCELERATED
    chi: float = 1.0
    loading: str = "11"
    reference: str = "default"      # "default" | "optimize" | float literal
    beta: float = 0.51
    tolerance: float = 1e-8
    stagnation: float = 2e-13
    cap: int = 50_000
    output: str = "out"
    seed: int = 0
    generator: GeneratorSpec = field(default_factory=GeneratorSpec)
    render: RenderSpec | None = None


def _parse_pair(text: str, what: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{what} must be 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def parse_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    cfg = RunConfig()
    for section in parser.sections():
        if section == "run":
            allowed = _RUN_KEYS
        elif section == "generator":
            allowed = _GEN_KEYS
        elif section == "render":
            allowed = _RENDER_KEYS
            cfg.render = RenderSpec()
        else:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in allowed:
                raise ConfigError(f"unknown key [{section}] {key}")
    apply_kv = _apply_key
    for section in parser.sections():
        for key, val in parser[section].items():
            apply_kv(cfg, section, key, val)
    return cfg


def _apply_key(cfg: RunConfig, section: str, key: str, val: str) -> None:
    val = val.strip()
    try:
        if section == "run":
            if key == "scheme":
                if val not in _SCHEMES:
                    raise ConfigError(
                        f"[run] scheme must be one of {sorted(_SCHEMES)}, got {val!r}")
                cfg.scheme = _SCHEMES[val]
            elif key == "algorithm":
                if val not in _ALGORITHMS:
                    raise ConfigError(
                        f"[run] algorithm must be one of {sorted(_ALGORITHMS)}, got {val!r}")
                cfg.algorithm = _ALGORITHMS[val]
            elif key == "chi":
                cfg.chi = float(val)
            elif key == "loading":
                cfg.loading = val
            elif key == "reference":
                if val not in ("default", "optimize"):
                    float(val)  # must parse
                cfg.reference = val
            elif key == "beta":
                cfg.beta = float(val)
            elif key == "tolerance":
                cfg.tolerance = float(val)
            elif key == "stagnation":
                cfg.stagnation = float(val)
            elif key == "cap":
                cfg.cap = int(val)
            elif key == "output":
                cfg.output = val
            elif key == "seed":
                cfg.seed = int(val)
        elif section == "generator":
            gen = cfg.generator
            if key == "kind":
                if val not in ("square", "cube", "sphere_array", "boolean_spheres", "file"):
                    raise ConfigError(f"[generator] kind {val!r} is not recognized")
                gen.kind = val
            elif key == "size":
                gen.size = int(val)
            elif key == "dim":
                gen.dim = int(val)
            elif key == "fraction":
                gen.fraction = float(val)
            elif key == "count":
                gen.count = int(val)
            elif key == "diameter":
                gen.diameter = float(val)
            elif key == "path":
                gen.path = val
        elif section == "render":
            spec = cfg.render
            if key == "component":
                spec.component = val
            elif key == "axis":
                spec.axis = int(val)
            elif key == "offset":
                spec.offset = float(val)
            elif key == "clamp":
                spec.clamp = _parse_pair(val, "[render] clamp")
                if not spec.clamp[0] < spec.clamp[1]:
                    raise ConfigError(f"[render] clamp must have lo < hi, got {val!r}")
            elif key == "colormap":
                spec.colormap = val
            elif key == "window":
                spec.window = _parse_pair(val, "[render] window")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {exc}") from exc
