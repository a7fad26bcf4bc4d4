"""Boolean circuits with oracle gates: canonical enumeration, evaluation
against a prefix oracle, consistency filtering, and majority votes.

Gate basis: unary NOT, fan-in-2 AND/OR over distinct earlier wires, and
ORACLE gates whose input wires spell a query string u; the gate reads the
oracle bit at the position holding u's membership.  Size counts every
non-input gate, oracle gates included.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .core import string_to_rank, strings_of_length
from .errors import EmptySet, MalformedCircuit, ScaleGuard
from .strategy import PrefixOracle

MAX_INPUTS = 4
MAX_SIZE = 5

Gate = tuple
OracleLike = Union[str, PrefixOracle]


@dataclass(frozen=True)
class OracleCircuit:
    n_inputs: int
    gates: tuple[Gate, ...]
    output: int

    @property
    def size(self) -> int:
        return len(self.gates) - self.n_inputs

    def dump(self) -> str:
        """One-line debug form: g<k>=OP(args)."""
        parts = []
        for k, g in enumerate(self.gates):
            refs = g[1] if g[0] == "ORC" else g[1:]
            parts.append(f"g{k}={g[0]}({','.join(str(r) for r in refs)})")
        return " ".join(parts) + f" out=g{self.output}"


def _oracle_bit(sigma: OracleLike, pos: int) -> int:
    if isinstance(sigma, PrefixOracle):
        return sigma.read(pos)
    if 1 <= pos <= len(sigma):
        return int(sigma[pos - 1])
    return 0


def eval_circuit(c: OracleCircuit, x: str, sigma: OracleLike) -> int:
    """Gate-by-gate evaluation of c on input x with oracle sigma.

    An ORACLE gate whose wires carry bits spelling u answers the bit at
    position rank(u)+1 of sigma, 0 when that lies beyond the prefix.
    """
    if len(x) != c.n_inputs:
        raise ValueError(f"input length {len(x)} != n_inputs {c.n_inputs}")
    values: list[int] = []
    for idx, gate in enumerate(c.gates):
        op = gate[0]
        if op == "IN":
            values.append(int(x[gate[1]]))
            continue
        refs = gate[1] if op == "ORC" else gate[1:]
        if any(not 0 <= r < idx for r in refs):
            raise MalformedCircuit(f"gate g{idx} references a non-earlier wire")
        if op == "NOT":
            values.append(1 - values[gate[1]])
        elif op == "AND":
            values.append(values[gate[1]] & values[gate[2]])
        elif op == "OR":
            values.append(values[gate[1]] | values[gate[2]])
        elif op == "ORC":
            u = "".join(str(values[w]) for w in gate[1])
            values.append(_oracle_bit(sigma, string_to_rank(u) + 1))
        else:
            raise MalformedCircuit(f"unknown gate op {op!r}")
    if not 0 <= c.output < len(c.gates):
        raise MalformedCircuit("output references a missing gate")
    return values[c.output]


def _gate_choices(n_prior: int, oracle_arity: int) -> list[Gate]:
    """Canonically ordered descriptors for one new gate over n_prior wires."""
    out: list[Gate] = [("NOT", a) for a in range(n_prior)]
    out += [("AND", a, b) for a in range(n_prior) for b in range(a + 1, n_prior)]
    out += [("OR", a, b) for a in range(n_prior) for b in range(a + 1, n_prior)]
    for arity in range(oracle_arity + 1):
        out += [("ORC", wires) for wires in itertools.product(range(n_prior), repeat=arity)]
    return out


def enumerate_circuits(
    n: int,
    s: int,
    *,
    max_inputs: int = MAX_INPUTS,
    max_size: int = MAX_SIZE,
    oracle_arity: int = 1,
) -> Iterator[OracleCircuit]:
    """Every circuit with n inputs and size <= s, in a stable canonical order.

    Canonical form: input gates first; each added gate except the last feeds a
    later gate; the output is the last added gate (an input wire when s
    permits size 0).  Enumeration is syntactic, with no semantic dedup.
    """
    if n > max_inputs or s > max_size:
        raise ScaleGuard(f"circuit enumeration capped at n <= {max_inputs}, s <= {max_size}")
    if n < 0 or s < 0:
        raise ValueError("n and s must be nonnegative")
    inputs = tuple(("IN", j) for j in range(n))
    for j in range(n):
        yield OracleCircuit(n, inputs, j)
    for m in range(1, s + 1):
        choice_lists = [_gate_choices(n + t, oracle_arity) for t in range(m)]
        for combo in itertools.product(*choice_lists):
            used: set[int] = set()
            for gate in combo:
                refs = gate[1] if gate[0] == "ORC" else gate[1:]
                used.update(r for r in refs if r >= n)
            if all(n + t in used for t in range(m - 1)):
                yield OracleCircuit(n, inputs + combo, n + m - 1)


def consistent_set(
    n: int,
    s: int,
    sigma: OracleLike,
    constraints: Iterable[tuple[str, int]],
    *,
    family: Sequence[OracleCircuit] | None = None,
    **caps,
) -> list[OracleCircuit]:
    """Circuits from the (n, s) enumeration that satisfy every constraint
    C(u) = z against the given oracle prefix."""
    pairs = list(constraints)
    for u, _ in pairs:
        if len(u) != n:
            raise ValueError(f"constraint string {u!r} is not of length {n}")
    pool: Iterable[OracleCircuit] = (
        family if family is not None else enumerate_circuits(n, s, **caps)
    )
    return [c for c in pool if all(eval_circuit(c, u, sigma) == z for u, z in pairs)]


def majority_vote(circuits: Sequence[OracleCircuit], u: str, sigma: OracleLike) -> int:
    """1 iff at least half the circuits output 1 on u (ties resolve to 1)."""
    if not circuits:
        raise EmptySet("majority over an empty circuit set")
    ones = sum(eval_circuit(c, u, sigma) for c in circuits)
    return 1 if 2 * ones >= len(circuits) else 0


def truth_table(c: OracleCircuit, sigma: OracleLike) -> str:
    """Output bits over all input assignments in lexicographic order."""
    if c.n_inputs > MAX_INPUTS:
        raise ScaleGuard(f"truth table capped at n <= {MAX_INPUTS}")
    return "".join(str(eval_circuit(c, x, sigma)) for x in strings_of_length(c.n_inputs))


@dataclass(frozen=True)
class FlipStep:
    """One diagonalization step: the string queried, the emitted (flipped)
    bit, and the consistent-set sizes before and after filtering."""

    z: str
    bit: int
    before: int
    after: int


def majority_or_one(circuits: Sequence[OracleCircuit], u: str, sigma: OracleLike) -> int:
    """Majority with the empty set treated as a tie (hence 1)."""
    if not circuits:
        return 1
    return majority_vote(circuits, u, sigma)


def diagonal_steps(
    family: Sequence[OracleCircuit], zs: Sequence[str], sigma: OracleLike
) -> tuple[list[FlipStep], list[OracleCircuit]]:
    """Run the majority-flip diagonalization over a fixed circuit family.

    Each step emits 1 minus the majority output on z and keeps only the
    circuits that agree with the emitted bit, halving the set or better.
    """
    current = list(family)
    steps: list[FlipStep] = []
    for z in zs:
        bit = 1 - majority_or_one(current, z, sigma)
        survivors = [c for c in current if eval_circuit(c, z, sigma) == bit]
        steps.append(FlipStep(z, bit, len(current), len(survivors)))
        current = survivors
    return steps, current
