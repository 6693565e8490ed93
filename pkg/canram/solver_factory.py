import importlib
from typing import Dict, Optional, Type

from .backtrack_solver import BacktrackSolver
from .base_solver import Solver
from .config import SolverConfig
from .errors import ConfigError
from .naive_solver import NaiveSolver


def _normalize_name(name: str) -> str:
    return str(name or "").strip().lower()


def _import_class(path: str) -> Type[Solver]:
    module_path, _, class_name = path.rpartition(".")
    if not module_path:
        raise ConfigError(f"solver path must be dotted, got {path!r}", {"path": path})
    try:
        module = importlib.import_module(module_path)
        cls = getattr(module, class_name)
    except (ImportError, AttributeError) as e:
        raise ConfigError(f"cannot import solver {path!r}: {e}", {"path": path}) from e
    if not (isinstance(cls, type) and issubclass(cls, Solver)):
        raise ConfigError(f"imported object is not a Solver subclass: {path}", {"path": path})
    return cls


class SolverFactory:
    """Registry of solver classes keyed by name."""

    def __init__(self) -> None:
        self._registry: Dict[str, Type[Solver]] = {}

    def register(self, name: str, cls: Type[Solver]) -> None:
        self._registry[_normalize_name(name)] = cls

    def register_from_path(self, name: str, class_path: str) -> None:
        self.register(name, _import_class(class_path))

    def unregister(self, name: str) -> None:
        self._registry.pop(_normalize_name(name), None)

    def get(self, name: str) -> Optional[Type[Solver]]:
        return self._registry.get(_normalize_name(name))

    def names(self):
        return sorted(self._registry)

    def create(self, config: SolverConfig) -> Solver:
        cls = self.get(config.name)
        if cls is None and "." in config.name:
            # dotted path: import and remember under its own name
            self.register_from_path(config.name, config.name)
            cls = self.get(config.name)
        if cls is None:
            raise ConfigError(f"unknown solver {config.name!r}", {"known": self.names()})
        return cls(config)


def get_default_factory() -> SolverFactory:
    return _default_factory


_default_factory = SolverFactory()
_default_factory.register("backtrack", BacktrackSolver)
_default_factory.register("naive", NaiveSolver)
