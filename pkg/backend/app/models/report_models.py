"""
Verification Report Data Models
Inequality reports, corollary checks and equality certificates
"""

from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .analysis_models import CycleWitness, LocalProfile
from .graph_models import Rational


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class GapVerdict(str, Enum):
    """How a report's gap is presented"""
    EQUALITY = "equality"
    STRICT = "strict"
    NUMERICALLY_TIGHT = "numerically tight"


class EqualityStatus(str, Enum):
    EQUALITY = "Equality"
    STRICT = "Strict"


class CertificateRoute(str, Enum):
    BLOCK_GRAPH_INDUCED = "BlockGraphInduced"
    OTHER = "Other"


class BlockStatus(str, Enum):
    INDUCED = "induced"
    UNCONSTRAINED = "unconstrained"  # triangles and bridges
    NOT_INDUCED = "not_induced"


class ComponentPhi(_Frozen):
    """phi(H_i) against (n_i - 1)/2 for one component of G - B"""

    vertices: Tuple[int, ...]
    edge_count: int = Field(..., ge=0)
    phi_subtotal: Rational
    bound: Rational

    @property
    def holds(self) -> bool:
        return self.phi_subtotal <= self.bound

    @property
    def is_tight(self) -> bool:
        return self.phi_subtotal == self.bound


class InequalityReport(_Frozen):
    """sum over edges of w(e)/C_w(e) against (n-1)/2"""

    n: int = Field(..., ge=1)
    m: int = Field(..., ge=0)
    connected: bool
    connected_component_count: int = Field(..., ge=1)
    local_sum: Rational
    bound: Rational
    gap: Rational
    is_equality: bool
    bridge_count: int = Field(..., ge=0)
    profiles: Tuple[LocalProfile, ...]
    per_component: Tuple[ComponentPhi, ...]

    @model_validator(mode="after")
    def check_consistency(self) -> "InequalityReport":
        if self.gap != self.bound - self.local_sum:
            raise ValueError("gap must equal bound - local_sum")
        if self.is_equality != (self.gap == 0):
            raise ValueError("is_equality must match gap == 0")
        if self.local_sum != sum((p.phi for p in self.profiles), Fraction(0)):
            raise ValueError("local_sum must equal the sum of profile phi values")
        return self

    @property
    def phi(self) -> Dict[int, Fraction]:
        return {profile.edge: profile.phi for profile in self.profiles}


class CyclePhiCheck(_Frozen):
    """phi(C) <= 1 for every simple cycle"""

    holds: bool
    cycles_checked: int = Field(..., ge=0)
    max_phi: Optional[Rational] = None
    max_phi_cycle: Optional[CycleWitness] = None


class BondyFanCheck(_Frozen):
    """A cycle of weighting-weight at least 2*total/(n-1)"""

    holds: bool
    total: Rational
    required: Rational
    witness: CycleWitness


class ErdosGallaiCheck(_Frozen):
    """A cycle of length at least 2m/(n-1)"""

    holds: bool
    longest_length: int
    required: Rational
    witness: CycleWitness


class ThresholdCheck(_Frozen):
    """Mass of edges with C_w(e) <= T and the complementary heavy mass"""

    threshold: Rational
    light_mass: Rational
    bound: Rational
    heavy_mass: Rational
    complement_bound: Rational
    total_weight: Rational

    @property
    def holds(self) -> bool:
        return self.light_mass <= self.bound and self.heavy_mass >= self.complement_bound


class LightEdgeForest(_Frozen):
    """F = {e : C_w(e) < 2 w(e)}"""

    edges: Tuple[int, ...]
    acyclic: bool
    limit: int

    @property
    def within_limit(self) -> bool:
        return len(self.edges) <= self.limit


class UnweightedChainCheck(_Frozen):
    """e(G)/L <= sum 1/c(e) <= (n-1)/2 on a bridgeless graph with unit weights"""

    edge_count: int
    longest_cycle: int
    lower: Rational
    local_sum: Rational
    bound: Rational

    @property
    def holds(self) -> bool:
        return self.lower <= self.local_sum <= self.bound


class SpecializationCheck(_Frozen):
    """Unit weights: equality iff the graph is a block graph"""

    is_equality: bool
    is_block_graph: bool

    @property
    def agrees(self) -> bool:
        return self.is_equality == self.is_block_graph


class InducedSolution(_Frozen):
    """Vertex values a with w(uv) = (a(u) + a(v))/2 on every clique edge"""

    vertices: Tuple[int, ...]
    a: Tuple[Rational, ...]
    all_nonnegative: bool

    def as_map(self) -> Dict[int, Fraction]:
        return dict(zip(self.vertices, self.a))

    @property
    def total(self) -> Fraction:
        return sum(self.a, Fraction(0))


class BlockCertificate(_Frozen):
    vertices: Tuple[int, ...]
    status: BlockStatus
    solution: Optional[InducedSolution] = None
    phi_subtotal: Rational
    bound: Rational


class ComponentConditions(_Frozen):
    """Necessary conditions (i)-(iii) for one bridgeless component"""

    vertices: Tuple[int, ...]
    phi_subtotal_equals_bound: bool
    tight_cycle: Optional[CycleWitness] = None
    tight_cycle_phi: Optional[Rational] = None
    termwise_tight: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.phi_subtotal_equals_bound
            and self.tight_cycle is not None
            and self.termwise_tight
        )


class NecessaryConditionsReport(_Frozen):
    components: Tuple[ComponentConditions, ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(component.all_hold for component in self.components)


class EqualityCertificate(_Frozen):
    status: EqualityStatus
    route: Optional[CertificateRoute] = None
    gap: Rational
    is_block_graph: bool
    per_block: Tuple[BlockCertificate, ...] = ()
    diagnostics: NecessaryConditionsReport


class KrCharacterization(_Frozen):
    """Equality on K_r against vertex-induced recoverability of w"""

    r: int
    is_equality: bool
    induced: bool
    solution: Optional[InducedSolution] = None
    common_c_w: Optional[Rational] = None
    phi_induced: Optional[bool] = None
    hamilton_phi_all_one: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        return self.is_equality == self.induced


class HamiltonInducedCheck(_Frozen):
    """All Hamilton cycles of equal weight implies an induced (possibly signed) weighting"""

    r: int
    equal_hamilton_weights: bool
    hamilton_weight: Optional[Rational] = None
    solution: Optional[InducedSolution] = None
    exchange_checks: int = 0

    @property
    def holds(self) -> bool:
        return not self.equal_hamilton_weights or self.solution is not None
