from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

Edge = Tuple[int, ...]
PositionSet = Tuple[int, ...]
EncodingVertex = Tuple[Edge, int]


def fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def position_set_str(S: PositionSet) -> str:
    return "{" + ",".join(str(i) for i in S) + "}"


class PatternMode(Enum):
    EXISTS = "exists"
    STRICT = "strict"


class LocalDenseMode(Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class AbundanceMode(Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class Outcome(Enum):
    FOUND = "avoiding-colouring-found"
    NONE_EXISTS = "none-exists"
    GUARD_EXCEEDED = "guard-exceeded"


class TrialOutcome(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    GUARD_EXCEEDED = "guard-exceeded"


class SigmaPolicy(Enum):
    ALL = "all"
    FIXED = "fixed"


class ListKind(Enum):
    CONSTANT = "constant"
    RANDOM = "random"


@dataclass(frozen=True)
class DensityResult:
    value: Fraction
    witness: Tuple[int, ...]
    uniformity: int
    witness_edges: int

    @property
    def exponent(self) -> Fraction:
        return -1 / self.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": fraction_str(self.value),
            "witness": list(self.witness),
            "witness_edges": self.witness_edges,
            "uniformity": self.uniformity,
            "exponent": fraction_str(self.exponent),
        }


@dataclass(frozen=True)
class ThresholdScale:
    n: int
    density: Fraction
    exponent: Fraction
    value: float


@dataclass(frozen=True)
class PatternWitness:
    witnessing_sets: Tuple[PositionSet, ...]
    # per witnessing S: realised projection -> colour
    maps: Dict[PositionSet, Dict[Tuple[int, ...], int]] = field(default_factory=dict)

    @property
    def canonical(self) -> bool:
        return bool(self.witnessing_sets)

    def __contains__(self, S) -> bool:
        return tuple(sorted(S)) in self.witnessing_sets

    def to_dict(self) -> Dict[str, Any]:
        return {
            "canonical": self.canonical,
            "witnessing_sets": [list(S) for S in self.witnessing_sets],
        }


@dataclass(frozen=True)
class DegreeProfile:
    n: int
    r: int
    deltas: Tuple[int, ...]
    bounds: Tuple[float, ...]
    density: Fraction

    @property
    def satisfied(self) -> Tuple[bool, ...]:
        return tuple(d <= b for d, b in zip(self.deltas, self.bounds))

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "r": self.r,
            "density": fraction_str(self.density),
            "levels": [
                {"j": j, "delta": d, "bound": b, "satisfied": ok}
                for j, (d, b, ok) in enumerate(zip(self.deltas, self.bounds, self.satisfied), start=1)
            ],
        }


@dataclass(frozen=True)
class ContainerDegreeReport:
    d0: float
    q: float
    bounds: Tuple[float, ...]
    satisfied: Tuple[bool, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d0": self.d0,
            "q": self.q,
            "bounds": list(self.bounds),
            "satisfied": list(self.satisfied),
            "all_satisfied": self.all_satisfied,
        }


@dataclass
class AbundanceReport:
    mode: AbundanceMode
    gamma: float
    epsilon: float
    increasing: bool = True
    min_size_ok: bool = True
    dense_ok: bool = True
    members_tested: int = 0
    min_size_violation: Optional[List[Any]] = None
    density_violation: Optional[List[Any]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def abundant(self) -> bool:
        return self.increasing and self.min_size_ok and self.dense_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "increasing": self.increasing,
            "min_size_ok": self.min_size_ok,
            "dense_ok": self.dense_ok,
            "abundant": self.abundant,
            "members_tested": self.members_tested,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class LocalDensityReport:
    dense: bool
    conclusive: bool
    mode: LocalDenseMode
    subset_size: int
    required_edges: Fraction
    subsets_checked: int
    witness: Optional[Tuple[int, ...]] = None
    witness_edges: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dense": self.dense,
            "conclusive": self.conclusive,
            "mode": self.mode.value,
            "subset_size": self.subset_size,
            "required_edges": fraction_str(self.required_edges),
            "subsets_checked": self.subsets_checked,
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_edges": self.witness_edges,
        }


@dataclass(frozen=True)
class ResilienceReport:
    d: Fraction
    gamma: Fraction
    rho: Fraction
    d_prime: Fraction
    halves_density: bool
    negative: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d_prime": fraction_str(self.d_prime),
            "d_prime_float": float(self.d_prime),
            "halves_density": self.halves_density,
            "negative": self.negative,
        }


@dataclass
class SolverStats:
    nodes: int = 0
    prunings: int = 0
    propagations: int = 0
    copies: int = 0

    def merge(self, other: "SolverStats") -> "SolverStats":
        """Work counters add up. ``copies`` is the size of the copy index of one host, which
        every merged run (split branches, orderings) rebuilds, so it is not summed."""
        return SolverStats(
            nodes=self.nodes + other.nodes,
            prunings=self.prunings + other.prunings,
            propagations=self.propagations + other.propagations,
            copies=max(self.copies, other.copies),
        )

    def to_dict(self) -> Dict[str, int]:
        return {
            "nodes": self.nodes,
            "prunings": self.prunings,
            "propagations": self.propagations,
            "copies": self.copies,
        }


@dataclass
class SolverResult:
    outcome: Outcome
    certificate: Optional[Dict[Edge, int]] = None
    stats: SolverStats = field(default_factory=SolverStats)
    guard: Optional[Dict[str, Any]] = None

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "certificate": (
                [{"edge": list(e), "colour": c} for e, c in sorted(self.certificate.items())]
                if self.certificate is not None else None
            ),
            "statistics": self.stats.to_dict(),
            "guard": self.guard,
        }


@dataclass
class CanarrowReport:
    holds: bool
    orderings_checked: int
    refuting_ordering: Optional[Tuple[int, ...]] = None
    certificate: Optional[Dict[Edge, int]] = None
    stats: SolverStats = field(default_factory=SolverStats)
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "orderings_checked": self.orderings_checked,
            "refuting_ordering": list(self.refuting_ordering) if self.refuting_ordering is not None else None,
            "certificate": (
                [{"edge": list(e), "colour": c} for e, c in sorted(self.certificate.items())]
                if self.certificate is not None else None
            ),
            "statistics": self.stats.to_dict(),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class RamseyNumberReport:
    value: Optional[int]
    lower_bound: int
    checked: Tuple[int, ...]
    guard: Optional[Dict[str, Any]] = None

    @property
    def known(self) -> bool:
        return self.value is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "checked": list(self.checked),
            "guard": self.guard,
        }


@dataclass(frozen=True)
class PointEstimate:
    p: float
    ratio_to_scale: float
    successes: int
    failures: int
    guard_exceeded: int
    estimate: float
    ci_lo: float
    ci_hi: float
    seconds: float

    @property
    def trials(self) -> int:
        return self.successes + self.failures + self.guard_exceeded

    @property
    def half_width(self) -> float:
        return (self.ci_hi - self.ci_lo) / 2

    @property
    def unreliable(self) -> bool:
        return self.trials > 0 and self.guard_exceeded > 0.05 * self.trials


@dataclass(frozen=True)
class ThresholdCurve:
    n: int
    scale: float
    exponent: Fraction
    points: Tuple[PointEstimate, ...]

    @property
    def unreliable(self) -> bool:
        return any(p.unreliable for p in self.points)


@dataclass(frozen=True)
class ResilienceTrial:
    deleted: int
    dense: bool
    min_edges: int
    chain_holds: bool


@dataclass(frozen=True)
class ResilienceCheck:
    bound: ResilienceReport
    base_dense: bool
    subset_size: int
    finite_size_gap: bool
    trials: Tuple[ResilienceTrial, ...]

    @property
    def all_dense(self) -> bool:
        return all(t.dense for t in self.trials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.bound.to_dict(),
            "base_dense": self.base_dense,
            "subset_size": self.subset_size,
            "finite_size_gap": self.finite_size_gap,
            "all_dense": self.all_dense,
            "trials": [
                {"deleted": t.deleted, "dense": t.dense, "min_edges": t.min_edges, "chain_holds": t.chain_holds}
                for t in self.trials
            ],
        }
