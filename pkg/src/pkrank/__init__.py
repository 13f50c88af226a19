"""Exact F_p-ranks of point-hyperplane incidence matrices over Z/p^k Z.

The library streams the incidence matrices of (Z/p^k Z)^n into an exact
finite-field eliminator, constructs and verifies Kakeya witnesses, replays
the Kakeya-to-rank reduction over exact cyclotomic arithmetic, and evaluates
every closed-form rank bound for comparison tables.
"""

from .bounds import (
    BoundsRow,
    InadmissibleK,
    a_lower,
    binomial,
    bounds_table,
    is_admissible,
    k_from_s,
    lt_upper,
    main_upper,
    rows_to_csv,
    w_lower,
)
from .cyclo import (
    Cyclotomic,
    CycloMatrix,
    build_B,
    build_F,
    cyclo_rank,
    root_power,
    specialize_at_one,
    verify_product_identity,
    verify_rank_chain,
)
from .gf_rank import EchelonBasis, RankReport, rank_dense_oracle, rank_streaming
from .incidence import (
    MatrixKind,
    RowStream,
    dense_matrix,
    export_matrix,
    hyperplane_row,
    stream_matrix,
)
from .kakeya import (
    KakeyaWitness,
    UncoveredDirection,
    exact_min_kakeya,
    greedy_kakeya,
    line_points,
    load_witness,
    save_witness,
    verify_kakeya,
)
from .ring import (
    NoUnitCoordinateError,
    ProjectivePoint,
    RingSpec,
    Vector,
    canonicalize,
    enumerate_projective,
    index_point,
    inner_product,
    is_unit,
    make_ring,
    point_index,
    projective_count,
    valuation,
)

__version__ = "0.1.0"
