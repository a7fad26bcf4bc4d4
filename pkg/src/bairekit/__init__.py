"""Desk-scale workbench for resource-bounded Baire category constructions:
finite extension strategies, Banach-Mazur games, circuit diagonalization, and
exact-rational martingales."""

from .core import (
    BoundFamily,
    bound_eval,
    cantor_pair,
    cantor_unpair,
    monus,
    rank_to_string,
    string_to_rank,
)
from .errors import (
    BairekitError,
    ConfigError,
    EmptySet,
    ExtensionCap,
    ExtensionOverflow,
    MalformedCircuit,
    NonTermination,
    PlayerIIStalled,
    ScaleGuard,
)
from .language import (
    LanguageOracle,
    census,
    chi_prefix,
    empty_language,
    explicit_language,
    f_extract,
    finite_variant,
    full_language,
    make_sparse,
    parity_language,
)
from .strategy import (
    Constructor,
    IndexedConstructor,
    LocalConstructor,
    PrefixOracle,
    ProbabilisticLocalConstructor,
    amplify,
    bound_extension_sizes,
    bound_uniform,
    enforce_query_set,
    ext_of,
    materialize_local,
    meets_at,
    meets_check,
    union_combine,
)
from .circuits import (
    OracleCircuit,
    consistent_set,
    enumerate_circuits,
    eval_circuit,
    majority_vote,
    truth_table,
)
from .martingale import (
    Martingale,
    ValueMartingale,
    capital_trace,
    density_bettor,
    empty_level_indicator,
    fairness_check,
)
from .game import (
    GameTranscript,
    diag_language_global,
    diag_language_local,
    diag_prefix_global,
    diag_prefix_local,
    indexed_to_winning,
    indexed_to_winning_loc,
    run_game,
    winning_to_indexed,
)
from .zoo import (
    CircuitCaps,
    derand_diagonalizer,
    generic_builder,
    sigma2_avoider,
    singleton_avoider,
    size_diagonalizer,
    sparse_avoider,
)

__version__ = "0.1.0"
