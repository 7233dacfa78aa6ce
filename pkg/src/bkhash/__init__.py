"""Upper bounds on the rate of perfect (b, k)-hash codes."""

__version__ = "0.1.0"

from .classic import (
    BoundParams,
    BoundReport,
    conjecture_bound,
    dvj_bound,
    fk_bound,
    km_bound,
    rate_bound_from_M,
)
from .cluster import (
    ClusterMatrix,
    ReducedFormResult,
    cluster_rate_bound,
    compute_cluster_matrix,
    epsilon_sweep,
    maximize_reduced_form,
    psi_max_bound,
)
from .codes import Code, max_code_search, parse_code, verify_hash_code
from .kernel import KernelContext, WeightedEnsemble, psi, psi_gradient, psi_naive, quadratic_form
from .optimize import OptimumWitness, SearchConfig, maximize_pair, oracle_scan, psi_max_global
from .simplex import (
    Distribution,
    ParameterError,
    PartitionKind,
    RegionSpec,
    grid_enumerate,
    make_distribution,
    partition,
    project_to_region,
    region_member,
)

__all__ = [name for name in dir() if not name.startswith("_")]
