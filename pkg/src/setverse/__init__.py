"""setverse: a decidable kernel for a closed universe of finite-set type codes.

The model is elementary: types are canonical finite sets, paths between
them are bijections. On top of it the kernel builds codes for types from
a type-former signature, decodes them, decides equality of codes by
computing explicit finite witness sets, and verifies the structural
theorems about the resulting universe (partial univalence, truncation,
structural degeneration, retention, pushout and join laws, and the
agreement of the recursive witness computation with an independent
fixpoint oracle) at desk scale.
"""

from .colimits import (
    PushoutResult,
    Span,
    check_join_prop,
    check_pushout_mono,
    check_pushout_mono_trunc,
    is_mono,
    join,
    product_span,
    pushout,
)
from .container import (
    ContainerSig,
    CoproductSig,
    ExtElement,
    FamilyAssignment,
    FiniteContainerTable,
    FinSetFamily,
    ReflPath,
    ShapeIdent,
    TableFamily,
    TableShape,
    coproduct,
    ext_enumerate,
    retains_check,
)
from .errors import (
    ArityMismatch,
    DomainMismatch,
    DuplicateName,
    ElementOutOfRange,
    EnumerationTooLarge,
    FrontendError,
    IndexTypeMismatch,
    KernelError,
    MalformedCode,
    ParseError,
    PreconditionViolated,
    UnknownFormer,
)
from .fincore import (
    Bij,
    ElemMap,
    FinSet,
    TruncLevel,
    compose_bij,
    enum_bijs,
    enum_maps,
    invert_bij,
    is_contr,
    is_prop,
    trunc_level,
)
from .frontend import (
    SignatureFile,
    build_signature,
    cli_main,
    format_code,
    load_signature,
    parse_expr,
    parse_signature,
)
from .report import Diagnostic, Failure, VerifyReport, __version__
from .suites import (
    run_appendixa,
    run_retains,
    run_structural,
    run_suite,
    run_truncation,
    run_univalence,
    run_wtypes,
)
from .universe import (
    CEmpty,
    CId,
    CN,
    Code,
    CPi,
    CPo0,
    CSigma,
    CSum,
    CUnit,
    PredicateSpec,
    UniverseSig,
    code_sexpr,
    el,
    enumerate_codes,
    eqv_total,
    eqv_total_count,
    eqv_witnesses,
    forced_truncation,
    is_equal,
    make_engine,
    negative_control,
    node_count,
    verify_partial_univalence,
    verify_truncated,
)
from .wtrees import (
    Collapsed,
    EqEngine,
    LabelPred,
    NoIndex,
    SaturationOracle,
    StructuralWitness,
    WitnessSet,
    WTree,
    encode_refl,
    enumerate_trees,
    eq_witnesses,
    tree_eq_oracle,
    verify_encode_decode,
    well_formed,
)
