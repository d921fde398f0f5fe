"""Portfolio diversification measures.

Weight-based indices (Herfindahl, weight entropy), the eigenvalue-based
Portfolio Diversification Index, and the entropy measure ``D = ∫ p log p``
of a portfolio's value distribution, with its change under option overlays
and its maximum-entropy version for given moments.
"""
__version__ = "0.1.0"

from .errors import (
    DegenerateInputError,
    DiversificationError,
    DomainError,
    InfeasibleMomentsError,
    InputFormatError,
    NumericalError,
    ValidationError,
)
from .weights import (
    WeightVector,
    herfindahl,
    herfindahl_rescaled,
    three_asset_comparison_grid,
    two_asset_comparison,
    weight_entropy,
    weight_entropy_subdivision,
)
from .spectral import EigenSpectrum, eigen_spectrum, pdi, pdi_weighted, validate_covariance
from .entropy import (
    Cauchy,
    DensityGrid,
    Diversification,
    Gaussian,
    LogNormal,
    combine_gaussian_pair,
    d_measure_analytic,
    d_measure_grid,
    equivalent_asset_count,
)
from .transforms import diversification_benefit, gearing_benefit, transform_density
from .black_scholes import (
    Collar,
    LongPut,
    MarketParams,
    PutSpread,
    d1,
    future_delta_collar,
    future_delta_long_put,
    future_delta_put_spread,
)
from .overlays import (
    BenefitRow,
    UnderlyingModel,
    benefit_collar,
    benefit_long_put,
    benefit_put_spread,
    sweep_figure,
)
from .maxent import MaxEntSolution, MomentTargets, d_difference_surface, solve_maxent

__all__ = [name for name in dir() if not name.startswith("_")]
