"""Majority Boolean automata networks: dynamics, the density task, forbidden patterns and reductions."""

from .circuit import (
    Circuit,
    LayeredCircuit,
    circuit_orbit,
    depth,
    dual,
    evaluate,
    format_circuit,
    iterate_circuit,
    layerize,
    monotonize,
    normalize,
    parse_circuit,
    truth_table,
    wrap_counter,
)
from .dct import DctVerdict, check_dct_all, check_dct_one
from .dynamics import (
    Orbit,
    complement,
    config,
    format_config,
    iterate,
    majority,
    orbit,
    parse_config,
    step,
)
from .errors import (
    BudgetExceededError,
    GraphFormatError,
    InvalidNetworkError,
    MbanError,
    ReductionError,
    TieError,
)
from .graph import (
    DiGraph,
    ValidationReport,
    clique_with_loops,
    format_graph,
    is_strongly_connected,
    parse_graph,
    rotation,
    validate_mban,
)
from .patterns import (
    CharacterizationVerdict,
    LeaderCertificate,
    MCycleCertificate,
    SelfSufficientCertificate,
    characterize,
    find_leader,
    find_maximal_self_sufficient,
    find_small_self_sufficient,
    find_ss_m_cycle,
    major,
    verify_certificate,
)
from .reduce import (
    ReductionOutput,
    circuit_to_mban,
    embed_circuit_config,
    full_reduction,
    gate_gadget,
    reduce_clique_to_ss,
    reduce_dctp_one,
    reduce_vc_to_leader,
)

__version__ = "0.1.0"
