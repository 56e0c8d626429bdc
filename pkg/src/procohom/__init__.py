"""procohom: continuous cohomology of profinite groups with trivial
coefficients, homotopy fixed point E2 pages, and sufficient criteria for
the finite-quotient comparison map to be a weak equivalence."""

from .abelian import (
    OMEGA,
    DirectSum,
    Fg,
    FgAbelianGroup,
    IntegerMatrix,
    PPrimary,
    RationalVS,
    StructuredAbelian,
    Zero,
    ZERO,
    cokernel,
    decompose_div_plus_torsion,
    direct_sum,
    homology_at,
    mod_n,
    n_torsion,
    smith_normal_form,
)
from .checker import (
    Certificate,
    Conclusion,
    Limits,
    RankRefutation,
    Scenario,
    Verdict,
    check_bounded,
    check_cor_divisible,
    check_cor_j,
    check_finite,
    check_vanishing,
    refute_equivalence,
    run_all,
)
from .cohomology import (
    BarCochainComplex,
    CohomologyClasses,
    InducedMap,
    StabilizationReport,
    SymbolicVerdict,
    UndeterminedAt,
    bar_complex,
    continuous_cohomology,
    continuous_cohomology_report,
    cyclic_closed_form,
    group_cohomology,
    inflation_map,
    symbolic_cohomology,
)
from .errors import (
    BudgetExceeded,
    CompositionNonzero,
    InvalidSubgroup,
    NotAHomomorphism,
    ProcohomError,
    ScenarioInvalid,
    UnknownFormat,
    UnsupportedGroupShape,
)
from .profinite import (
    INFINITY,
    CanonicalFamily,
    CofinalCertificate,
    DeclaredChain,
    Finite,
    FiniteGroupTable,
    OpenNormalDescriptor,
    PrimeIndexedProduct,
    PrimeSet,
    Procyclic,
    Product,
    ProfiniteDescriptor,
    QuotientTower,
    RefutedAt,
    SupernaturalNumber,
    canonical_tower,
    check_cofinal,
    closed_subgroup,
    divides_order,
    index,
    induced_family,
    order,
    quotient,
    whole_group,
)
from .spectra import (
    HQ,
    GradedPiece,
    MoravaK,
    Shift,
    SpectrumDescriptor,
    Wedge,
    degree_classes,
    graded_shape,
    homotopy_of,
    is_bounded_above,
    torsion_profile,
)
from .spectral_sequence import (
    Abutment,
    E2Page,
    collapse_and_abutment,
    e2_page,
    render_chart,
    render_png,
)

__version__ = "0.1.0"
