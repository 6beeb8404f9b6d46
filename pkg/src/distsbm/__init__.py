"""Distributed community detection for large sparse networks.

Block-wise row splitting of the adjacency matrix across simulated workers,
a multi-round master/worker pseudo-likelihood fit for plain and
degree-corrected block models, corrected-BIC model selection, and exact
communication / computation accounting.
"""

from .generators import (DcsbmConfig, PlantedNetwork, SbmConfig,
                         generate_dcsbm, generate_sbm, make_planted_theta)
from .graph import SparseGraph, degree_summary, load_edge_list, write_edge_list
from .metrics import confusion_matrix, nmi, red
from .partition import (IndexMap, WorkerShard, block_split, reassemble_labels,
                        scatter_labels, shard_coverage_check)
from .runtime import (FitConfig, FitResult, RoundLedger, aggregate_global_params,
                      ledger_scaling_report, run_dcpl, run_dpl, run_single_machine)
from .selection import SelectionConfig, select_k, worker_loglik
from .spectral import init_labels_scp, init_labels_ssc
from .worker import (CountStats, ModelParams, count_stats, em_dcsbm, em_sbm,
                     local_label_update, worker_summary)

__version__ = "0.1.0"
