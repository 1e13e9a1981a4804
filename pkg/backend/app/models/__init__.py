"""
Data models for the heaviest-cycle bound verifier
"""

from .analysis_models import (
    Block,
    BlockDecomposition,
    BlockGraphCheck,
    BridgeSet,
    CycleWitness,
    HamiltonCatalog,
    LocalProfile,
    TwoEdgeDecomposition,
    TwoOptConnectivity,
    canonical_cycle,
    cycle_edge_pairs,
)
from .graph_models import (
    Edge,
    GraphLoadResult,
    Rational,
    SubgraphWeight,
    WeightedGraph,
    format_rational,
    parse_rational,
)
from .report_models import (
    BlockCertificate,
    BlockStatus,
    BondyFanCheck,
    CertificateRoute,
    ComponentConditions,
    ComponentPhi,
    CyclePhiCheck,
    EqualityCertificate,
    EqualityStatus,
    ErdosGallaiCheck,
    GapVerdict,
    HamiltonInducedCheck,
    InducedSolution,
    InequalityReport,
    KrCharacterization,
    LightEdgeForest,
    NecessaryConditionsReport,
    SpecializationCheck,
    ThresholdCheck,
    UnweightedChainCheck,
)
from .spec_models import (
    ArithmeticMode,
    BlockGraphSpec,
    BlockSpec,
    ExplicitWeights,
    InducedWeights,
    OutputFormat,
    RandomSpec,
    RunConfig,
    UniformWeights,
)
