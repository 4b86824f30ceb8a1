"""Quantum-style relevance states and CHSH tests for multimodal document pairs."""

from .chsh import (
    CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    ChshResult,
    MeasurementSetting,
    chsh_from_document_pair,
    chsh_statistic,
    expectation_independent,
    maximize_quantum_chsh,
    quantum_chsh,
    quantum_expectation,
)
from .composite import (
    BellStateKind,
    CompositeState,
    SchmidtDecomposition,
    bell_state,
    check_rotation_invariance,
    is_entangled,
    marginal_probability,
    measure_collapse,
    schmidt_decompose,
    tensor_product,
)
from .errors import DataFormatError, DomainError, InvariantError
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    PairResult,
    QuerySubset,
    build_subset,
    enumerate_relevant_pairs,
    run_experiment,
)
from .hilbert import (
    BasisAngle,
    DocumentState,
    Modality,
    Outcome,
    born_probability,
    cross_basis_probability,
    rotate_basis,
    state_from_probability,
)
from .retrieval import (
    MultimodalDocument,
    MultimodalQuery,
    ScoredDocument,
    TextDocument,
    TfidfIndex,
    build_tfidf_index,
    cosine_relevance,
    expand_query,
    image_relevance,
    score_corpus,
    tokenize,
)
from .synthetic import generate_synthetic_dataset

__version__ = "0.1.0"
