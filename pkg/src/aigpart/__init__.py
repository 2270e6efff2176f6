"""aigpart: partition-parallel AIG logic optimization with an RL flow explorer."""

from .aig import (
    AigBuilder,
    AigError,
    AigNetwork,
    InterfaceMismatchError,
    Latch,
    SequentialShell,
    extract_comb,
    fanout_counts,
    levels,
    lit,
    lit_compl,
    lit_not,
    lit_var,
    reattach_latches,
    simulate,
    strash,
)
from .aiger_io import AigFormatError, parse_aiger, write_aiger
from .equiv import EquivPolicy, EquivVerdict, check_equiv
from .merge import MergeError, merge, verify_merge
from .partition import (
    PartitionConfig,
    PartitionManifest,
    cut_and_stitch,
    partition_network,
)
from .report import FlowConfig, QorReport, compare, flow_end_to_end, qor
from .rl import OptimizeBudget, optimize_partition, run_parallel
from .transforms import (
    ACTION_TOKENS,
    apply_action,
    balance,
    baseline_script,
    refactor,
    resub,
    rewrite,
)

__version__ = "0.1.0"
