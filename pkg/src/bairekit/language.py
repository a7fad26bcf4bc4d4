"""Lazy language oracles, characteristic-prefix materialization, census, and
generators for test languages.

A language is presented as a total membership callback.  Explicit languages
carry a finite characteristic prefix; queries beyond it answer 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping

from .core import derive_seed, rank_to_string, string_to_rank, strings_of_length
from .errors import ScaleGuard

CENSUS_MAX_LEN = 20
PADDED_MAX_LEN = 2**16


@dataclass(frozen=True)
class LanguageOracle:
    """A language given by a deterministic membership callback.

    ``member`` must return the same bit for the same string across calls;
    internal caches, if any, must preserve that.
    """

    name: str
    member: Callable[[str], int]
    description: str = ""

    def __repr__(self) -> str:  # callbacks are noise in test output
        return f"LanguageOracle({self.name!r})"


def empty_language() -> LanguageOracle:
    return LanguageOracle("empty", lambda x: 0, "no members")


def full_language() -> LanguageOracle:
    return LanguageOracle("full", lambda x: 1, "every string")


def parity_language() -> LanguageOracle:
    return LanguageOracle("parity", lambda x: x.count("1") % 2, "odd number of ones")


def explicit_language(bits: str, name: str = "explicit") -> LanguageOracle:
    """Language whose characteristic prefix is ``bits``; membership beyond is 0."""
    if bits.strip("01") and bits != "":
        raise ValueError("explicit language bits must be over {0,1}")

    def member(x: str) -> int:
        r = string_to_rank(x)
        return int(bits[r]) if r < len(bits) else 0

    return LanguageOracle(name, member, f"explicit prefix of {len(bits)} bits")


def finite_language(members: set[str] | frozenset[str], name: str = "finite") -> LanguageOracle:
    frozen = frozenset(members)
    return LanguageOracle(name, lambda x: int(x in frozen), f"{len(frozen)} members")


def language_from_file(path: str, name: str | None = None) -> LanguageOracle:
    """Load an explicit language: one line of {0,1} chi-prefix bits."""
    with open(path, "r", encoding="ascii") as fh:
        line = fh.readline().strip()
    return explicit_language(line, name or path)


def chi_prefix(lang: LanguageOracle, n_bits: int) -> str:
    """First n_bits of the characteristic sequence (position p holds s_{p-1})."""
    return "".join(str(lang.member(rank_to_string(p))) for p in range(n_bits))


def census(lang: LanguageOracle, n: int, max_len: int = CENSUS_MAX_LEN) -> int:
    """Exact count of length-n members, by enumeration."""
    if n > max_len:
        raise ScaleGuard(f"census over 2^{n} strings exceeds cap n <= {max_len}")
    return sum(lang.member(x) for x in strings_of_length(n))


def census_table(lang: LanguageOracle, up_to: int, max_len: int = CENSUS_MAX_LEN) -> dict[int, int]:
    """Per-length member counts for n = 0..up_to."""
    return {n: census(lang, n, max_len) for n in range(up_to + 1)}


def poly_eval(coeffs: list[int], n: int) -> int:
    """Evaluate c0 + c1*n + c2*n^2 + ... with nonnegative coefficients."""
    return sum(c * n**e for e, c in enumerate(coeffs))


def make_sparse(coeffs: list[int], seed: int) -> LanguageOracle:
    """Seeded language with census(n) <= p(n) for every n, where p is given by
    ``coeffs``.  Members sit at seeded pseudorandom positions per length so the
    census bound is tight enough to exercise avoider tests.
    """
    if any(c < 0 for c in coeffs):
        raise ValueError("polynomial coefficients must be nonnegative")
    cache: dict[int, frozenset[int]] = {}

    def level(n: int) -> frozenset[int]:
        got = cache.get(n)
        if got is None:
            quota = min(poly_eval(coeffs, n), 2**n)
            rng = random.Random(derive_seed("sparse", seed, n))
            got = frozenset(rng.sample(range(2**n), quota)) if quota else frozenset()
            cache[n] = got  # idempotent: value depends only on (seed, n)
        return got

    label = "+".join(f"{c}n^{e}" for e, c in enumerate(coeffs))
    return LanguageOracle(
        f"sparse[{label};seed={seed}]",
        lambda x: int((int(x, 2) if x else 0) in level(len(x))),
        "seeded sparse language",
    )


def finite_variant(lang: LanguageOracle, patch: Mapping[str, int]) -> LanguageOracle:
    """Override membership on the finitely many strings in ``patch``."""
    frozen = dict(patch)
    return LanguageOracle(
        f"{lang.name}+patch{len(frozen)}",
        lambda x: frozen[x] if x in frozen else lang.member(x),
        f"finite variant of {lang.name}",
    )


def f_extract(a: LanguageOracle, b: int, max_padded_len: int = PADDED_MAX_LEN) -> LanguageOracle:
    """The language {u : 0^(2^(b|u|)) u is a member of ``a``}."""
    if b < 1:
        raise ValueError("padding exponent b must be >= 1")

    def member(u: str) -> int:
        pad = 2 ** (b * len(u))
        if pad + len(u) > max_padded_len:
            raise ScaleGuard(
                f"padded query of length {pad + len(u)} exceeds cap {max_padded_len}"
            )
        return a.member("0" * pad + u)

    return LanguageOracle(f"extract[b={b}]({a.name})", member)
