"""Desk-scale computational experiments on finite stand-ins for the random
graph: extension-property hosts, the five minimal function gadgets, relation
preservation, behavior classification, arrow verification and the generation
procedures behind the five-class picture."""

from .canonicity import (
    BehaviorClass,
    BehaviorProfile,
    classify_on_set,
    find_canonical_copy,
    is_canonical_between,
    is_canonical_constant_graph,
    profile_partitioned,
)
from .gadgets import (
    FunctionGadget,
    GadgetConstructionError,
    PairColor,
    compose,
    make_named,
    pair_color,
    violates,
)
from .generation import (
    GeneratorSet,
    InterpolationWitness,
    ReductClass,
    ReductClassification,
    all_graph_types,
    canonical_form,
    classify_reduct,
    collapse_all,
    delete_all_edges,
    delete_edge_step,
    interpolate,
    orbit_closure,
    verify_witness,
)
from .graphs import (
    Embedding,
    ExtensionResult,
    Graph,
    GraphFormatError,
    PairKind,
    PartialIso,
    build_ec,
    build_paley,
    check_extension,
    complement_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    extend_partial_iso,
    find_embeddings,
    format_graph,
    pair_kind,
    parse_graph,
    path_graph,
    switch_graph,
)
from .ramsey import (
    ArrowBudget,
    ArrowQuery,
    ArrowResult,
    CopyColoring,
    enumerate_copies,
    find_edge_nonedge_mono_copy,
    find_mono_copy,
    induced_pair_coloring,
    verify_arrow,
)
from .relations import (
    EqualityDefinability,
    FormulaRelation,
    ParityRelation,
    PreservationResult,
    Relation,
    TupleSetRelation,
    definable_from_equality,
    distinct_relation,
    edge_relation,
    eval_relation,
    invariant_under_complement,
    invariant_under_switch,
    nonedge_relation,
    parity_relation,
    parse_relation_spec,
    preserved_by_map,
)
from .structures import (
    ConstantGraph,
    PartitionedGraph,
    associate_partitioned,
    find_const_embeddings,
    find_part_embeddings,
    format_constant,
    format_partitioned,
    parse_structure,
)

__all__ = [name for name in dir() if not name.startswith("_")]
