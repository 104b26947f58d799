"""Joint spectral radius bounds and spectral finiteness certificates."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundsTable,
    BudgetExceeded,
    SmpCandidate,
    bounds_table,
    refine_bounds,
    rho_hat_n,
    rho_n,
    smp_candidates,
)
from .certificates import (  # noqa: E402
    Certificate,
    PeripheralReport,
    certify_finiteness,
    check_uniform_subperipheral,
    peripheral_ratio,
    peripheral_report,
    r1_diagnostic,
)
from .families import (  # noqa: E402
    ALPHA_STAR,
    hare_family,
    morris_family,
    random_family,
    scaled_rotation_family,
    sign_pair_enumerator,
    triangular_family,
)
from .limits import (  # noqa: E402
    irreducibility,
    nonsingular_limit_certificate,
    rank_profile,
    sample_limit_points,
)
from .linalg import (  # noqa: E402
    NormKind,
    determinant,
    eigenvalues,
    induced_norm,
    spectral_radius,
)
from .products import (  # noqa: E402
    MatrixSet,
    ScaledMatrix,
    enumerate_words,
    evaluate_word,
    necklace_representatives,
)
from .stability import (  # noqa: E402
    Decision,
    SwitchingSequence,
    decide_stability,
    periodically_switched_stable,
    simulate_trajectory,
    sturmian_word,
)
