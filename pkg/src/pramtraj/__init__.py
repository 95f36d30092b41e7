"""Priority-CRCW machine simulator, trajectory datasets, efficiency analytics."""

from .graphs import Digraph, tarjan_scc
from .machine import (
    ActivityRecord,
    InterconnectionGraph,
    MachineState,
    NodeUpdate,
    StepLimitExceeded,
    Trace,
    UNDEF,
    WriteRequest,
    resolve_writes,
    run_machine,
    step_machine,
)
from .algorithms import (
    ALGORITHMS,
    PAIRS,
    SearchInstance,
    SortInstance,
    binary_search,
    bidirectional_bfs,
    bubble_sort,
    dcsc,
    kosaraju,
    oets_sort,
    parallel_search,
    run,
)
from .trajectory import (
    HintFrame,
    ProbeSpec,
    Sample,
    encode_sample,
    parse_ndjson,
    probe_spec,
    replay_sample,
    serialize_ndjson,
    validate_sample,
)
from .efficiency import (
    EfficiencyReport,
    capacity,
    edge_efficiency,
    node_efficiency,
    scaling_report,
)
from .harness import (
    GenConfig,
    gen_digraph,
    gen_permutation,
    gen_search_instance,
    sample_seed,
)

__version__ = "0.1.0"
