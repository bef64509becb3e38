"""Versioned default ladders and sample sizes for the certificate suite.

Reports embed DEFAULTS_VERSION so runs stay comparable; change the
version whenever a ladder changes.
"""

from fractions import Fraction

DEFAULTS_VERSION = "1"

PROP32 = {
    "sample_count": 100,
    "support_bound": 20,
    "norm_bound": 10,
    "d": 2,
    "orbit_check_horizon": 10_000,
    "forced_sample_count": 50,
    "forced_tolerance": Fraction(1, 4),
    "forced_budget": 1_000_000,
    "schedule_length": 5,
}

PROP36_CONTRACTION = {
    "weight": Fraction(1, 2),
    "d": 1,
    "target_count": 200,
    "outside_count": 50,
    "inside_margin": Fraction(99, 100),
    "outside_margin": Fraction(101, 100),
    "outside_budget": 100_000,
    "gelfand_n": 64,
    "gelfand_window": (0, 128),
    "gelfand_rel_tol": 0.01,
    "schedule_length": 5,
}

PROP36_EXPANSION = {
    "weight": 2,
    "d": 1,
    "target_count": 100,
    "mix_length": 5,
    "mix_budget": 100_000,
    "budget_ladder": (1_000, 10_000, 100_000),
    "collapse_threshold": 1e-6,
    "stagnation_window": 300,
}

RIESZ = {
    "contract_weight": Fraction(1, 2),
    "expand_weight": 2,
    "d": 1,
    "sample_count": 1000,
    "band_b_window": (-80, -40),
    "band_a_scale": Fraction(1, 2),
    "lambda_ladder_exponents": tuple(range(1, 21)),
    "ratio_factor": 1.9,
    "schedule_length": 5,
    "search_budget": 20_000,
    "orbit_horizon": 12,
}

PROP15 = {
    "scale_exponents": tuple(range(1, 13)),
    "d": 1,
    "target_eps": Fraction(1, 1000),
    "mix_length": 3,
    "mix_budget": 50_000,
}

PROP21 = {
    "d": Fraction(1, 2),
    "visit_times": (30, 300, 3000, 9000),
    "count_ladder": (100, 1_000, 10_000),
    "m_ladder_num_den": ((1, 10), (1, 1), (10, 1)),  # M = d * num/den
    "sample_count": 20,
    "noise_scale": 0.4,
}

PROP22 = {
    "lambda": Fraction(1, 2),
    "steps": 10,
    "d": 1,
    "drift_target_scale_log2": -15,
    "drift_target_index": -20,
    "drift_time": 20,
    "diagonal_target_log2": -12,
}
