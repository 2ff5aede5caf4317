"""tiltforge: graded path-algebra computations for singular corners.

From a cyclic skew-group presentation the library builds the folded
(Beilinson-type) quiver, checks the relevant hypotheses, computes quadratic
duals and idempotent-truncated presentations, and cross-validates the
results with levelled mutations of exceptional collections on the Euler
lattice.
"""

from .presentation import (
    Arrow,
    GradedPresentation,
    Path,
    Quiver,
    Relation,
    compose_paths,
    export_dot,
    parse,
    path_degree,
    serialize,
    validate_presentation,
)
from .skewgroup import (
    CyclicGroupData,
    folded_quiver,
    gorenstein_parameter,
    induced_idempotent,
    isolated_check,
    mckay_quiver,
    sl_check,
)
from .findim import (
    AlgebraTable,
    BoundExceededError,
    build_algebra,
    cartan_matrix,
    dimension,
    nilpotency_index,
    radical_power_slices,
    truncate,
)
from .homological import (
    ExtTable,
    LevelledStructure,
    detect_levels,
    ext_table,
    koszul_check_levelled,
    min_proj_resolution,
    quadratic_dual,
)
from .mutation import (
    EulerCollection,
    coxeter_check,
    from_gram,
    left_dual,
    left_mutate,
    levelled_mutate_left,
    levelled_mutate_right,
    right_dual,
    right_mutate,
    shifted_simples_collection,
)

__version__ = "0.1.0"
