"""Clustering laws of species sampling sequences whose base measure has atoms."""
from .asymptotics import (ExperimentConfig, ExperimentReport, Normalizer, SamplePath, gibbs_normalizer,
                          karlin_regime, kr_limit_constant, log_checkpoints, run_experiment, simulate_path)
from .basemeasure import Atom, BaseMeasure, Fresh, PathState, a_ml, alpha_of, h_sharp, sample_dish
from .eppf import (Custom, Gibbs, PitmanYor, StirlingTable, VTable, eval_eppf, predictive_weights,
                   py_v_table, sample_latent_partition, stirling_sigma)
from .errors import InvalidArgument, InvalidModel, InvalidState, ResourceLimit
from .induced import (InducedProbability, c_lambda, enumerate_occupancies, enumerate_profiles,
                      induced_eppf_general, induced_eppf_gibbs, induced_eppf_spike_slab,
                      induced_probability, joint_atom_probability, oracle_induced_eppf, oracle_law, q_tilde)
from .partitions import Partition, block_sizes, enumerate_partitions, induced_partition, restrict
from .sampling import sample_gsss, sample_paths

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig", "ExperimentReport", "Normalizer", "SamplePath", "gibbs_normalizer",
    "karlin_regime", "kr_limit_constant", "log_checkpoints", "run_experiment", "simulate_path",
    "Atom", "BaseMeasure", "Fresh", "PathState", "a_ml", "alpha_of", "h_sharp", "sample_dish",
    "Custom", "Gibbs", "PitmanYor", "StirlingTable", "VTable", "eval_eppf", "predictive_weights",
    "py_v_table", "sample_latent_partition", "stirling_sigma", "InvalidArgument", "InvalidModel",
    "InvalidState", "ResourceLimit", "InducedProbability", "c_lambda", "enumerate_occupancies",
    "enumerate_profiles", "induced_eppf_general", "induced_eppf_gibbs", "induced_eppf_spike_slab",
    "induced_probability", "joint_atom_probability", "oracle_induced_eppf", "oracle_law", "q_tilde",
    "Partition", "block_sizes", "enumerate_partitions", "induced_partition", "restrict",
    "sample_gsss", "sample_paths",
]
