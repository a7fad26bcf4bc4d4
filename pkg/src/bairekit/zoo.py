"""Named, parameterized strategies: the concrete avoiders and diagonalizers
every experiment and test drives.

Circuit-backed diagonalizers run against desk-scale caps and anchor their
correctness in the halving invariant: each emitted bit flips the majority of
the circuits still consistent with the bits chosen so far, so the consistent
set at least halves per bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .circuits import (
    OracleCircuit,
    enumerate_circuits,
    eval_circuit,
    majority_or_one,
)
from .core import ceil_log2, prefix_arg_size, rank_to_string, string_to_rank
from .errors import NonTermination, ScaleGuard
from .language import LanguageOracle, explicit_language
from .strategy import (
    Constructor,
    IndexedConstructor,
    LocalConstructor,
    PrefixOracle,
    local_as_indexed,
    materialize_local,
)

EMPTY_QUERY_SET: Callable[[int, int, int], tuple[int, ...]] = lambda n, i, k: ()


@dataclass(frozen=True)
class CircuitCaps:
    """Desk-scale limits for the circuit-backed diagonalizers."""

    max_input_len: int = 3
    max_circuit_size: int = 5
    max_ext_bits: int = 96
    oracle_arity: int = 1

    def enumerate(self, n: int, s: int) -> list[OracleCircuit]:
        return list(
            enumerate_circuits(
                n,
                s,
                max_inputs=self.max_input_len,
                max_size=self.max_circuit_size,
                oracle_arity=self.oracle_arity,
            )
        )


def singleton_avoider(lang: LanguageOracle) -> Constructor:
    """Extends any prefix by the flip of the language's next membership bit."""

    def extend(view: PrefixOracle) -> str:
        return str(1 - lang.member(rank_to_string(len(view))))

    return Constructor(f"singleton[{lang.name}]", extend)


def singleton_family() -> IndexedConstructor:
    """h_i avoids the one-string language {s_i}: the flipped bit is 1 except
    at the position that stores s_i itself."""

    def extend_at(i: int, view: PrefixOracle) -> str:
        return "0" if len(view) == i else "1"

    return IndexedConstructor("singletons", extend_at)


def singleton_family_local() -> LocalConstructor:
    def ext_bit(i: int, view: PrefixOracle, k: int) -> Optional[int]:
        if k > 1:
            return None
        return 0 if len(view) == i else 1

    return LocalConstructor("singletons-loc", ext_bit, EMPTY_QUERY_SET)


def ones_family() -> IndexedConstructor:
    """h_i appends i ones."""
    return IndexedConstructor("ones", lambda i, view: "1" * i)


def ones_family_local() -> LocalConstructor:
    def ext_bit(i: int, view: PrefixOracle, k: int) -> Optional[int]:
        return 1 if k <= i else None

    return LocalConstructor("ones-loc", ext_bit, EMPTY_QUERY_SET)


def sparse_avoider() -> LocalConstructor:
    """Pads the prefix with as many ones as it is long, without reading it;
    a sparse language cannot keep up with the ones."""

    def ext_bit(i: int, view: PrefixOracle, k: int) -> Optional[int]:
        return 1 if k <= len(view) else None

    return LocalConstructor("sparse", ext_bit, EMPTY_QUERY_SET)


def size_diagonalizer(c: int, caps: CircuitCaps = CircuitCaps()) -> Constructor:
    """Emits a block of bits, each flipping the majority vote of the small
    circuits still consistent with the block so far.

    For argument size n the block has min(2 n^(c+1), cap) bits; the circuit
    family for a bit is every oracle circuit with |z| inputs and size at most
    |z|^c, where z is the string whose membership position the bit occupies.
    Constraints apply per input length, so the family resets when the scan
    crosses into longer strings.
    """
    if c < 1:
        raise ValueError("size exponent c must be >= 1")

    def extend(view: PrefixOracle) -> str:
        n = prefix_arg_size(len(view))
        total = min(2 * n ** (c + 1), caps.max_ext_bits)
        bits: list[str] = []
        fam: list[OracleCircuit] = []
        fam_len: Optional[int] = None
        for i in range(1, total + 1):
            z = rank_to_string(len(view) + i - 1)
            if len(z) > caps.max_input_len:
                raise ScaleGuard(f"diagonal string of length {len(z)} exceeds caps")
            bound = len(z) ** c
            if bound > caps.max_circuit_size:
                raise ScaleGuard(f"circuit size bound {bound} exceeds caps")
            if fam_len != len(z):
                fam = caps.enumerate(len(z), bound)
                fam_len = len(z)
            bit = 1 - majority_or_one(fam, z, view)
            fam = [cc for cc in fam if eval_circuit(cc, z, view) == bit]
            bits.append(str(bit))
        return "".join(bits)

    return Constructor(f"size-diag[c={c}]", extend)


def coding_split(x: str, b: int) -> Optional[str]:
    """If x = 0^(2^(b|u|)) u for some u, return u, else None."""
    total = len(x)
    level = 1
    while 2 ** (b * level) + level < total:
        level += 1
    pad = 2 ** (b * level)
    if pad + level != total:
        return None
    return x[pad:] if x[:pad] == "0" * pad else None


def last_coding_rank(b: int, max_level: int) -> int:
    """Rank of the last coding string whose level fits the caps."""
    return string_to_rank("0" * 2 ** (b * max_level) + "1" * max_level)


def derand_diagonalizer(
    b: int,
    size_for_level: Callable[[int], int],
    caps: CircuitCaps = CircuitCaps(max_input_len=2),
) -> Constructor:
    """Scans positions after the prefix, writing 0 at non-coding positions and
    the majority flip at positions that code a padded string 0^(2^(b|u|)) u.

    Coding bits accumulate constraints C(u_j) = z_j over the oracle circuits
    of size below size_for_level(|u|); the scan stops after the level's last
    string u = 1^|u|.
    """
    if b < 1:
        raise ValueError("padding exponent b must be >= 1")

    def extend(view: PrefixOracle) -> str:
        if len(view) > last_coding_rank(b, caps.max_input_len):
            raise ScaleGuard("prefix lies beyond the last coding level within caps")
        bits: list[str] = []
        fam: list[OracleCircuit] = []
        level: Optional[int] = None
        i = 0
        while True:
            i += 1
            if i > caps.max_ext_bits:
                raise ScaleGuard(f"extension exceeds {caps.max_ext_bits} bits")
            x = rank_to_string(len(view) + i - 1)
            u = coding_split(x, b)
            if u is None or (level is not None and len(u) != level):
                bits.append("0")
                continue
            if level is None:
                level = len(u)
                if level > caps.max_input_len:
                    raise ScaleGuard(f"coding level {level} exceeds caps")
                size_bound = size_for_level(level)
                if size_bound - 1 > caps.max_circuit_size:
                    raise ScaleGuard(f"size bound {size_bound} exceeds caps")
                fam = caps.enumerate(level, size_bound - 1) if size_bound >= 1 else []
            bit = 1 - majority_or_one(fam, u, view)
            fam = [cc for cc in fam if eval_circuit(cc, u, view) == bit]
            bits.append(str(bit))
            if u == "1" * level:
                return "".join(bits)

    return Constructor(f"derand-diag[b={b}]", extend)


def finite_class_predicate() -> Callable[[LanguageOracle, int, int], int]:
    """Membership test whose universal closure captures exactly the finite
    languages: some threshold x with no member of rank >= x."""

    def m_pred(lang: LanguageOracle, x: int, y: int) -> int:
        return 1 if y >= x and lang.member(rank_to_string(y)) else 0

    return m_pred


def default_sigma2_read_bound(n: int, k: int) -> int:
    """Position bound covering the reads of :func:`finite_class_predicate`."""
    return ceil_log2(k + 2)


def sigma2_avoider(
    m_pred: Callable[[LanguageOracle, int, int], int],
    a: LanguageOracle,
    *,
    read_bound: Callable[[int, int], int] = default_sigma2_read_bound,
    k_cap: int = 2048,
) -> LocalConstructor:
    """Extends along ``a`` until the simulated predicate certifies, for every
    small x, a witness y, at which point the extension ends.

    The first bit is always emitted; ending is only considered from the second
    bit on, so the strategy strictly extends.  ``read_bound`` must bound the
    prefix positions ``m_pred`` may read at the given thresholds; the default
    covers :func:`finite_class_predicate`.  If ``a``'s finite variants sit
    inside the avoided class the extension never ends and the cap reports it.
    """

    def ext_bit(i: int, view: PrefixOracle, k: int) -> Optional[int]:
        if k > k_cap:
            raise NonTermination(
                f"sigma2 extension ran past {k_cap} bits; the tail language's "
                "finite variants likely lie inside the avoided class"
            )
        n = prefix_arg_size(len(view))

        def member(s: str) -> int:
            pos = string_to_rank(s) + 1
            if pos <= len(view):
                return view.read(pos)
            return a.member(s)

        spliced = LanguageOracle(f"{a.name}|prefix", member)
        if k >= 2:
            x_max = ceil_log2(n + 2)
            y_max = ceil_log2(k + 2)
            if all(
                any(m_pred(spliced, x, y) for y in range(y_max)) for x in range(x_max)
            ):
                return None
        return a.member(rank_to_string(len(view) + k - 1))

    def query_set(n: int, i: int, k: int) -> tuple[int, ...]:
        return tuple(range(1, read_bound(n, k) + 1))

    return LocalConstructor(f"sigma2({a.name})", ext_bit, query_set)


def generic_builder(
    hs: list[LocalConstructor], blocks: int, *, ext_cap: int = 4096
) -> LanguageOracle:
    """Language meeting each given strategy, with zero runs wide enough to
    leave infinitely many empty levels in the built prefix.

    The prefix starts with a single 1, then alternates ext(h_i(prefix)) with a
    zero block five times the length built so far, for i = 1..blocks.
    Membership beyond the built prefix is 0.
    """
    if blocks > len(hs):
        raise ValueError("need one strategy per block")
    prefix = "1"
    for i in range(1, blocks + 1):
        prefix += materialize_local(hs[i - 1], i, prefix, ext_cap)
        prefix += "0" * (5 * len(prefix))
    return explicit_language(prefix, name=f"generic[{blocks}]")


def indexed_families() -> dict[str, IndexedConstructor]:
    """The indexed families the diagonal and game suites run over."""
    return {
        "singletons": singleton_family(),
        "ones": ones_family(),
        "sparse": local_as_indexed(sparse_avoider()),
    }


def local_families() -> dict[str, LocalConstructor]:
    return {
        "singletons-loc": singleton_family_local(),
        "ones-loc": ones_family_local(),
        "sparse": sparse_avoider(),
    }


@dataclass(frozen=True)
class StrategySpec:
    """Registry entry: a named strategy with validated parameters."""

    name: str
    params: Mapping[str, object] = field(default_factory=dict)


STRATEGY_NAMES = ("singleton", "sparse", "size-diag", "derand-diag", "sigma2", "generic")


def build_strategy(spec: StrategySpec, languages: Mapping[str, LanguageOracle]):
    """Materialize a registry entry; language-valued parameters are resolved
    through ``languages`` by name."""
    name, params = spec.name, dict(spec.params)

    def lang_param(key: str, default: Optional[str] = None) -> LanguageOracle:
        label = str(params.get(key, default))
        if label not in languages:
            raise KeyError(f"unknown language {label!r} for strategy {name!r}")
        return languages[label]

    if name == "singleton":
        return singleton_avoider(lang_param("language", "empty"))
    if name == "sparse":
        return sparse_avoider()
    if name == "size-diag":
        caps = CircuitCaps(max_ext_bits=int(params.get("max-ext", 96)))
        return size_diagonalizer(int(params.get("c", 1)), caps)
    if name == "derand-diag":
        size_bound = int(params.get("size", 2))
        caps = CircuitCaps(max_input_len=2, max_ext_bits=int(params.get("max-ext", 96)))
        return derand_diagonalizer(int(params.get("b", 1)), lambda lvl: size_bound, caps)
    if name == "sigma2":
        return sigma2_avoider(finite_class_predicate(), lang_param("tail", "full"))
    if name == "generic":
        fams = local_families()
        hs = [fams["sparse"], fams["ones-loc"], fams["singletons-loc"]]
        return generic_builder(hs, int(params.get("blocks", 3)))
    raise KeyError(f"unknown strategy {name!r}")
