"""Plain-text ``key = value`` configuration files and the CLI run manifest."""

from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, Union

from .errors import ConfigError
from .kink import DEFAULT_BINS, DEFAULT_GRID_HI, DEFAULT_GRID_LO, DEFAULT_GRID_POINTS
from .bootstrap import DEFAULT_REPLICATIONS
from .types import AbsorberName

COMMANDS = ("build-panel", "describe", "fit", "bootstrap", "simulate", "binscatter")


def read_key_values(path: Union[str, "PathLike[str]"]) -> Dict[str, str]:
    """Parses ``key = value`` lines; blank lines and ``#`` comments are skipped
    and ``-`` in keys is read as ``_``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}") from None
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        values[key] = value.strip()
    return values


def _names(value: str) -> Tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


# option name -> parser of its config-file value
OPTIONS: Dict[str, Callable[[str], Any]] = {
    "proposals": str,
    "votes": str,
    "voters": str,
    "panel": str,
    "out": str,
    "spec": _names,
    "grid_points": int,
    "grid_lo": float,
    "grid_hi": float,
    "reps": int,
    "seed": int,
    "threads": int,
    "bins": int,
    "cutoff": float,
    "absorber": str,
    "dgp": str,
}

DEFAULTS: Dict[str, Any] = {
    "out": ".",
    "spec": (),
    "grid_points": DEFAULT_GRID_POINTS,
    "grid_lo": DEFAULT_GRID_LO,
    "grid_hi": DEFAULT_GRID_HI,
    "reps": DEFAULT_REPLICATIONS,
    "threads": 1,
    "bins": DEFAULT_BINS,
    "absorber": "projections",
}


@dataclass(frozen=True)
class RunManifest:
    command: str
    out: Path
    proposals: Optional[Path] = None
    votes: Optional[Path] = None
    voters: Optional[Path] = None
    panel: Optional[Path] = None
    specs: Tuple[str, ...] = ()
    seed: Optional[int] = None
    grid_points: int = DEFAULT_GRID_POINTS
    grid_lo: float = DEFAULT_GRID_LO
    grid_hi: float = DEFAULT_GRID_HI
    reps: int = DEFAULT_REPLICATIONS
    threads: int = 1
    bins: int = DEFAULT_BINS
    cutoff: Optional[float] = None
    absorber: AbsorberName = "projections"
    dgp: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command: {self.command}")
        if self.grid_points < 2:
            raise ConfigError(f"grid-points must be >= 2, got {self.grid_points}")
        if not 0 <= self.grid_lo < self.grid_hi <= 100:
            raise ConfigError(
                f"need 0 <= grid-lo < grid-hi <= 100, got {self.grid_lo}, {self.grid_hi}"
            )
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.bins < 2:
            raise ConfigError(f"bins must be >= 2, got {self.bins}")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.absorber not in ("projections", "dummies"):
            raise ConfigError(f"unknown absorber: {self.absorber}")


def resolve_options(
    flags: Mapping[str, Any], config_file: Optional[str] = None
) -> Dict[str, Any]:
    """Flags override the config file, which overrides the built-in defaults.
    Flags left unset are passed as ``None``."""
    resolved = dict(DEFAULTS)
    if config_file is not None:
        for key, value in read_key_values(config_file).items():
            if key not in OPTIONS:
                raise ConfigError(f"{config_file}: unknown option {key!r}")
            try:
                resolved[key] = OPTIONS[key](value)
            except ValueError:
                raise ConfigError(
                    f"{config_file}: invalid value for {key}: {value!r}"
                ) from None
    for key, value in flags.items():
        if key in OPTIONS and value is not None:
            resolved[key] = value
    return resolved


def _path(value: Optional[str]) -> Optional[Path]:
    return None if value is None else Path(value)


def build_manifest(
    command: str, flags: Mapping[str, Any], config_file: Optional[str] = None
) -> RunManifest:
    options = resolve_options(flags, config_file)
    return RunManifest(
        command=command,
        out=Path(options["out"]),
        proposals=_path(options.get("proposals")),
        votes=_path(options.get("votes")),
        voters=_path(options.get("voters")),
        panel=_path(options.get("panel")),
        specs=tuple(options["spec"]),
        seed=options.get("seed"),
        grid_points=options["grid_points"],
        grid_lo=options["grid_lo"],
        grid_hi=options["grid_hi"],
        reps=options["reps"],
        threads=options["threads"],
        bins=options["bins"],
        cutoff=options.get("cutoff"),
        absorber=options["absorber"],
        dgp=_path(options.get("dgp")),
    )
