"""Experiment configuration and environment overrides."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field

from ..errors import DomainError
from ..sampler import MODELS

ENV_OUTPUT_DIR = "LOGCONCAVE_ROOTS_OUTPUT_DIR"
ENV_THREADS = "LOGCONCAVE_ROOTS_THREADS"

SUITES = ("radial", "angular", "potential", "hughes", "origin", "realroots")
ROOT_SUITES = frozenset(SUITES) - {"hughes"}

# engineering thresholds used when judging replicates; stored with every record
THRESHOLDS = {
    "modulus_band": 0.1,
    "origin_delta": 0.01,
    "origin_slack": 0.05,
    "potential_radii": [0.5, 1.0, 2.0],
    "potential_tolerance": 0.1,
    "pointwise_slack": 0.1,
    "pointwise_radius_bound": 2.0,
    "real_root_tol": 1e-6,
    "conjugate_tol": 1e-8,
    "vieta_tol_per_degree": 1e-6,
    "max_failure_fraction": 0.2,
}


def default_output_dir() -> str:
    return os.environ.get(ENV_OUTPUT_DIR, "experiment_output")


def default_threads() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_THREADS} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"{ENV_THREADS} must be a positive integer, got {raw!r}")
    return value


def parse_suites(spec) -> tuple[str, ...]:
    names = [spec] if isinstance(spec, str) else list(spec)
    out = []
    for name in names:
        for part in name.split(","):
            part = part.strip()
            if part == "all":
                out.extend(SUITES)
            elif part in SUITES:
                out.append(part)
            else:
                raise DomainError(f"unknown suite {part!r}; expected one of {SUITES + ('all',)}")
    return tuple(s for s in SUITES if s in out)


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    n_values: tuple
    replicates: int = 1
    master_seed: int = 0
    alpha: float = 1.0
    precision: str | int = "auto"
    target_residual: float = 1e-12
    suites: tuple = SUITES
    output_dir: str | None = None
    emit_svg: bool = False
    threads: int | None = None
    thresholds: dict = field(default_factory=lambda: dict(THRESHOLDS))

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}; expected one of {MODELS}")
        n_values = tuple(int(n) for n in self.n_values)
        if not n_values:
            raise DomainError("n_values must be nonempty")
        if any(n < 1 for n in n_values):
            raise DomainError(f"degrees must be positive, got {n_values}")
        if self.replicates < 1:
            raise DomainError(f"replicates must be >= 1, got {self.replicates}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.precision != "auto" and int(self.precision) < 2:
            raise DomainError(f"precision must be 'auto' or a bit count, got {self.precision!r}")
        object.__setattr__(self, "n_values", n_values)
        object.__setattr__(self, "suites", parse_suites(self.suites))
        if self.output_dir is None:
            object.__setattr__(self, "output_dir", default_output_dir())
        if self.threads is None:
            object.__setattr__(self, "threads", default_threads())

    @property
    def needs_roots(self) -> bool:
        return bool(ROOT_SUITES.intersection(self.suites))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_values"] = list(self.n_values)
        d["suites"] = list(self.suites)
        return d
