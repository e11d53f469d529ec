"""Exact computational toolkit for isoperimetry on Cayley graphs.

Builds balls, boundaries, Folner sets and mass-transport ledgers for a fixed
family of finitely generated groups, and checks growth and isoperimetric
inequalities with exact integer and rational arithmetic.
"""

from .balls import (
    INFINITE,
    BallTable,
    GrowthEstimate,
    average_length,
    enumerate_ball,
    growth_rate_upper,
    phi,
    table_for_volume,
)
from .groups import (
    DihedralInfinite,
    FreeGroup,
    GeneratorReport,
    Group,
    Heisenberg,
    LamplighterZ2,
    ZPowerD,
    make_group,
    validate_generators,
)
from .constants import (
    BallSubsetsScope,
    Certificate,
    ConnectedScope,
    CscBound,
    FolnerBound,
    QuotientEstimate,
    certify_at_scale,
    check_folner_form,
    csc_to_folner,
    folner_to_csc,
    quotient_estimate,
)
from .folner import (
    FolnerRecord,
    LowerBound,
    MinRatioTable,
    connected_subsets,
    folner_exact,
    folner_family_upper,
    min_ratio_table,
)
from .isoperimetry import (
    FORMS,
    FiniteSubset,
    InequalityReport,
    boundary,
    boundary_ratio,
    check_inequality,
)
from .transport import (
    LEMMAS,
    GeodesicWord,
    LemmaReport,
    TransportLedger,
    build_ledger,
    geodesic_word,
    verify_lemma,
)

__version__ = "0.1.0"
