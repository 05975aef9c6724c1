"""Reassemble a sequence from the merged pieces of two shotgun cuttings."""

from .assembler import (
    Limits,
    Move,
    MoveKind,
    ReconstructionResult,
    SearchState,
    SearchStats,
    apply_move,
    find_fir_pairs,
    reconstruct,
    replay_trace,
    step_candidates,
    verify_tiling,
)
from .errors import (
    EmptyFragment,
    FragreconError,
    IllegalMove,
    InvalidByte,
    LimitExceeded,
    OffsetOutOfRange,
    Overflow,
    PositionOutOfRange,
    SharedBreakpoint,
    TextTooLarge,
    TooLarge,
    TooManyCuts,
    Unsolvable,
)
from .overlap import (
    OverlapGraph,
    exact_superstring_small,
    greedy_superstring,
    max_overlap_path,
    overlap_graph,
    overlap_weight,
)
from .parallel import (
    Executor,
    ExecutorConfig,
    KeyArray,
    chunked_radix_sort,
    exclusive_scan,
    radix_sort,
    split_by_bit,
)
from .seqmodel import AlphabetMode, Fragment, FragmentSet, Residual, Sequence, make_fragment_set, residual_view
from .shotgun import CutSpec, Instance, double_cut, random_cut_pair, random_instance
from .suffixarray import (
    FragmentIndex,
    SuffixArray,
    build_index,
    build_naive,
    build_parallel,
    locate_prefix_range,
    prefix_related_fragments,
)

__version__ = "0.1.0"
