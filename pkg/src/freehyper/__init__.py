"""Exact Weingarten calculus on noncrossing partitions, free hypergeometric
laws, and twisted group algebras of ``Z_n^2``."""

from .partitions import (
    Kind,
    MoebiusTable,
    PartitionFamily,
    SetPartition,
    SizeLimitError,
    block_count,
    cabling,
    catalan,
    enumerate_partitions,
    is_noncrossing,
    join,
    kernel_partition,
    moebius_table,
    refines,
)
from .weingarten import (
    ExactMatrix,
    MomentRequest,
    SingularGramError,
    fhg_moment,
    gram,
    hyperspherical_moment,
    joint_moment,
    verify_cabling_weingarten,
    verify_equal_laws,
    verify_ks_join,
)
# the ``weingarten`` function stays in its submodule so the module name is not shadowed
from .freelaws import (
    CumulantSequence,
    LimitParams,
    MomentSequence,
    UnsupportedParameter,
    asymptotic_scan,
    cumulants_to_moments,
    free_poisson_moments,
    moments_to_cumulants,
    semicircle_moments,
    thm34_closed_form,
)
from .twist import (
    Cocycle,
    GroupElem,
    TwistedGroupAlgebra,
    build_psi,
    canonical_trace,
    omega,
    standard_cocycle,
    verify_haar_transport,
    verify_psi_iso,
)

__version__ = "0.1.0"
