"""Level-set density criterion, local derivative lemmas and cross-validation."""

from .crossval import CANONICAL_SYMBOLS, CrossValParams, CrossValReport, SpaceVerdict, cross_validate
from .density import (
    DensityVerdict,
    SweepResult,
    center_net,
    density_ratio,
    density_ratio_euclidean,
    density_search,
    density_sweep,
    density_table,
)
from .lemmas import (
    ELambda,
    LemmaCheck,
    LemmaSample,
    default_beta_prime,
    e_lambda_ratio,
    exceptional_mass_ratio,
    exceptional_set_member,
    luecking_lemma_check,
)

__all__ = [
    "CANONICAL_SYMBOLS",
    "CrossValParams",
    "CrossValReport",
    "DensityVerdict",
    "ELambda",
    "LemmaCheck",
    "LemmaSample",
    "SpaceVerdict",
    "SweepResult",
    "center_net",
    "cross_validate",
    "default_beta_prime",
    "density_ratio",
    "density_ratio_euclidean",
    "density_search",
    "density_sweep",
    "density_table",
    "e_lambda_ratio",
    "exceptional_mass_ratio",
    "exceptional_set_member",
    "luecking_lemma_check",
]
