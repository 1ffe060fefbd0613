"""Learning DAGs from linear SEM data with few root causes."""

from .datagen import (DataGenConfig, Dataset, FrcAudit, NoiseDist, RootCauses, audit_frc,
                      expected_frc_bounds, generate_dataset, sample_root_causes, synthesize)
from .expm import acyclicity, expm
from .graph import (GraphGenConfig, GraphType, WeightedDag, generate_random_dag, is_acyclic,
                    remove_cycles, threshold, transitive_closure)
from .l0 import L0Result, enumerate_dags, l0_objective, solve_l0
from .metrics import (MetricsReport, edge_rates, root_cause_metrics, shd, sid, varsortability,
                      weight_losses)
from .solver import (SolveResult, SolverConfig, objective, objective_and_grad, recover_root_causes,
                     solve)

acyclicity_h = acyclicity

__version__ = "0.1.0"
