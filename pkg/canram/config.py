# Guard and worker defaults, overridable from the environment (.env is loaded by the CLI)
import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Optional

from .errors import ConfigError, GuardExceededError

ENV_PREFIX = "CANRAM_GUARD_"


@dataclass(frozen=True)
class Guards:
    nodes: int = 2_000_000
    copies: int = 200_000
    encoding: int = 5_000_000
    subsets: int = 10_000_000
    abundance_vertices: int = 20
    orderings: int = 40_320
    profile: int = 20_000_000
    density_vertices: int = 20

    @classmethod
    def from_env(cls) -> "Guards":
        overrides = {}
        for f in fields(cls):
            raw = os.environ.get(ENV_PREFIX + f.name.upper())
            if raw is None or not raw.strip():
                continue
            try:
                overrides[f.name] = int(raw.strip())
            except ValueError as e:
                raise ConfigError(f"{ENV_PREFIX}{f.name.upper()} must be an integer", {"value": raw}) from e
        if overrides:
            logging.getLogger(__name__).info("[config] guard overrides from env: %s", overrides)
        return cls(**overrides)

    def with_overrides(self, **values: Optional[int]) -> "Guards":
        return replace(self, **{k: v for k, v in values.items() if v is not None})

    def check(self, name: str, observed: int) -> None:
        limit = getattr(self, name)
        if observed > limit:
            raise GuardExceededError(name, limit, observed)


def default_workers() -> int:
    raw = (os.environ.get("CANRAM_WORKERS") or "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as e:
        raise ConfigError("CANRAM_WORKERS must be an integer", {"value": raw}) from e


@dataclass(frozen=True)
class SolverConfig:
    name: str = "backtrack"
    propagate: bool = True
    workers: int = 1
    guards: Guards = Guards()
