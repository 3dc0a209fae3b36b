"""annealbench: benchmark toolkit for sampling minor-embedded maximum-clique
QUBOs and maximum-cut Isings with a classical annealing backend.

Pipeline: random graphs -> problem models -> hardware topology -> clique
minor embedding -> simulated annealing -> broken-chain-aware metrics ->
grid-search records and CSV exports.
"""

from .graphs import Graph, complement, density, density_bin, generate_gnp
from .models import (
    IsingModel,
    QuboModel,
    evaluate,
    ising_to_qubo,
    max_clique_qubo,
    max_cut_ising,
    qubo_to_ising,
    spin_binary_cut_objective,
)
from .oracles import all_maximum_cliques, max_cut_exact, reference_cut
from .topology import Topology, apply_defects, chimera, pegasus, zephyr
from .embedding import (
    Embedding,
    PhysicalProblem,
    chain_stats,
    chimera_clique_embedding,
    embed_problem,
    load_embedding,
    save_embedding,
    unembed,
    validate_embedding,
)
from .sampler import SamplerParams, SampleSet, SimulatedAnnealer, map_anneal_time, sample
from .metrics import (
    ExperimentRecord,
    FairSamplingIneligible,
    LogicalSample,
    approximation_ratio,
    chain_break_proportion,
    chain_break_runs,
    fair_sampling_entropy,
    ground_state_probability,
    mean_approximation_ratio,
    time_to_solution,
)
from .harness import ExperimentConfig, export_curves, export_tts, parse_config, run_grid

__version__ = "0.1.0"
