"""Discrete-event simulator for the three representative MAC protocols, with
a sequential-stopping statistics engine used to validate the analytical
models."""

from .config import RepResult, SimConfig, SimStats, deploy, neighbor_lists, pair_distance
from .compare import DivergencePoint, DivergenceReport, compare_model_sim
from .psa import run_psa, run_psa_once
from .schedule import Schedule, build_tsmp_schedule, verify_schedule
from .smac import run_smac, run_smac_once
from .stats import replicate_until_confident
from .tsmp import run_tsmp, run_tsmp_once
