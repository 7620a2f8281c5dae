"""Petri-net-to-CCS translation with executable equivalence certificates."""

from .ccs import (
    Action,
    CcsState,
    DefiningEquations,
    NIL,
    NameRef,
    Nil,
    Parallel,
    Prefix,
    Process,
    Restriction,
    Sum,
    TAU_ACTION,
    build_ccs_lts,
    canonicalize,
    co,
    par_of,
    render_process,
    restrict_chain,
    state_to_process,
    step,
    sum_of,
    term_size,
)
from .encode import (
    EncodingResult,
    encode_2tau,
    encode_ccs_net,
    encode_free_choice,
    encode_free_choice_workflow,
    encode_group_choice,
)
from .equivalence import (
    Distinguisher,
    EquivalenceReport,
    deadlocks,
    has_divergent_path,
    strong_bisim,
    weak_bisim,
    weak_closure,
)
from .errors import (
    FiniteNetViolationError,
    InputError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SourceSpan,
    ToolError,
    UnsupportedFeatureError,
    UnsupportedStructureError,
)
from .formats import (
    parse_ccs,
    parse_net_text,
    parse_pnml,
    print_ccs,
    print_net_text,
    read_aut,
    write_aut,
)
from .lts import TAU, ExplorationLimits, Lts
from .nets import (
    Marking,
    NetClassification,
    PetriNet,
    build_net_lts,
    classify,
    enabled_transitions,
    fire,
    place_groups,
    postset,
    unique_choice,
    unique_synchronisation,
)
from .transform import (
    RewriteRecord,
    TransformTrace,
    group_reduce,
    group_reduce_step,
    reduce_preset_step,
    reduce_presets,
)

__version__ = "0.1.0"
