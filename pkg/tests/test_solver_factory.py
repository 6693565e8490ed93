import sys
import types

import pytest

from canram.backtrack_solver import BacktrackSolver
from canram.base_solver import AvoidanceInstance, Solver
from canram.config import SolverConfig
from canram.dto import Outcome, SolverResult
from canram.errors import ConfigError
from canram.hypergraph import ListAssignment, Ordering, complete_graph
from canram.ramsey_service import find_avoiding_colouring
from canram.solver_factory import SolverFactory, get_default_factory


def _install_fake_solvers(monkeypatch):
    """
    Install a fake module holding a Solver that always reports the first list colour everywhere.
    """
    class FirstColourSolver(Solver):
        name = "first"

        def _search(self, instance):
            certificate = {e: instance.lists[e][0] for e in instance.host.edges}
            return SolverResult(Outcome.FOUND, certificate=certificate)

    fake_module = types.ModuleType("fake_solvers")
    fake_module.FirstColourSolver = FirstColourSolver
    fake_module.NotASolver = object
    monkeypatch.setitem(sys.modules, "fake_solvers", fake_module)
    return FirstColourSolver


def _instance():
    G = complete_graph(3)
    return AvoidanceInstance(G, G, Ordering.natural(3), ListAssignment.constant(G, (4, 5)))


def test_default_factory_knows_builtin_solvers():
    assert get_default_factory().names() == ["backtrack", "naive"]
    assert isinstance(get_default_factory().create(SolverConfig()), BacktrackSolver)


def test_names_are_normalised():
    factory = SolverFactory()
    factory.register("  BackTrack ", BacktrackSolver)
    assert factory.get("backtrack") is BacktrackSolver
    factory.unregister("BACKTRACK")
    assert factory.get("backtrack") is None


def test_unknown_solver_is_a_config_error():
    with pytest.raises(ConfigError) as info:
        SolverFactory().create(SolverConfig(name="sat"))
    assert info.value.details["known"] == []


def test_dotted_path_is_imported_and_registered(monkeypatch):
    cls = _install_fake_solvers(monkeypatch)
    factory = SolverFactory()
    solver = factory.create(SolverConfig(name="fake_solvers.FirstColourSolver"))
    assert isinstance(solver, cls)
    assert factory.get("fake_solvers.FirstColourSolver") is cls


def test_registered_solver_runs_through_the_service(monkeypatch):
    cls = _install_fake_solvers(monkeypatch)
    factory = SolverFactory()
    factory.register("first", cls)
    result = find_avoiding_colouring(_instance(), SolverConfig(name="first"), factory)
    assert result.found
    assert set(result.certificate.values()) == {4}


def test_import_rejects_non_solvers(monkeypatch):
    _install_fake_solvers(monkeypatch)
    factory = SolverFactory()
    with pytest.raises(ConfigError):
        factory.register_from_path("bad", "fake_solvers.NotASolver")
    with pytest.raises(ConfigError):
        factory.register_from_path("missing", "fake_solvers.Nope")
    with pytest.raises(ConfigError):
        factory.register_from_path("undotted", "Solver")
