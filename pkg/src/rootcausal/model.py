"""Core value types shared by every engine: networks, assignments, evidence,
and candidate-set algebra.

Conventions used throughout the package:

* Cause variables are indexed 1..p externally.  Bit tuples over the causes
  are ordered ``(x_1, ..., x_p)``; when an assignment is packed into an
  integer, ``x_1`` occupies the most significant bit, so iterating masks in
  increasing order walks assignments lexicographically.
* A CPT row index packs the parent bits in ascending parent-index order,
  first parent most significant (the same order as the bit strings in the
  text format).
* All types are immutable after construction and safe to share across
  threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class ModelError(ValueError):
    """Raised when a network, assignment, or candidate set is malformed."""


# ---------------------------------------------------------------------------
# bit helpers


def pack_bits(bits: Sequence[int]) -> int:
    """Pack a bit tuple into an integer, first element most significant."""
    m = 0
    for b in bits:
        m = (m << 1) | (b & 1)
    return m


def unpack_bits(mask: int, width: int) -> tuple[int, ...]:
    """Inverse of :func:`pack_bits`."""
    return tuple((mask >> (width - 1 - j)) & 1 for j in range(width))


# ---------------------------------------------------------------------------
# assignments and evidence


@dataclass(frozen=True)
class Assignment:
    """A 0/1 valuation of a subset of the cause variables, optionally with
    the outcome.

    ``entries`` holds ``(index, value)`` pairs sorted by index; ``y`` is the
    outcome value or ``None`` when the outcome is unassigned.
    """

    entries: tuple[tuple[int, int], ...] = ()
    y: int | None = None

    def __post_init__(self) -> None:
        seen = set()
        for idx, val in self.entries:
            if idx < 1:
                raise ModelError(f"variable index {idx} out of range (must be >= 1)")
            if idx in seen:
                raise ModelError(f"duplicate index {idx} in assignment")
            if val not in (0, 1):
                raise ModelError(f"value for X{idx} must be 0 or 1, got {val!r}")
            seen.add(idx)
        if list(self.entries) != sorted(self.entries):
            raise ModelError("assignment entries must be sorted by index")
        if self.y is not None and self.y not in (0, 1):
            raise ModelError(f"outcome value must be 0 or 1, got {self.y!r}")

    @classmethod
    def of(cls, values: Mapping[int, int] | None = None, y: int | None = None) -> "Assignment":
        items = tuple(sorted((int(i), int(v)) for i, v in (values or {}).items()))
        return cls(items, y)

    @classmethod
    def total(cls, bits: Sequence[int], y: int | None = None) -> "Assignment":
        return cls(tuple((i + 1, int(b)) for i, b in enumerate(bits)), y)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def value(self, idx: int) -> int:
        for i, v in self.entries:
            if i == idx:
                return v
        raise KeyError(idx)

    def get(self, idx: int) -> int | None:
        for i, v in self.entries:
            if i == idx:
                return v
        return None

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def is_total(self, p: int) -> bool:
        return self.indices == tuple(range(1, p + 1))

    def bits(self, p: int) -> tuple[int, ...]:
        """The full bit tuple ``(x_1..x_p)``; requires a total assignment."""
        if not self.is_total(p):
            raise ModelError("assignment is not total over 1..p")
        return tuple(v for _, v in self.entries)

    def __len__(self) -> int:
        return len(self.entries) + (self.y is not None)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)


def leq_partial_order(a: Assignment, b: Assignment) -> bool:
    """Componentwise comparison ``a <= b`` over identical index sets.

    Both assignments must cover the same variable indices (and agree on
    whether the outcome is assigned); anything else is a usage error, not
    an incomparability.
    """
    if a.indices != b.indices or (a.y is None) != (b.y is None):
        raise ModelError("assignments compare under <= only over identical index sets")
    if any(av > bv for (_, av), (_, bv) in zip(a.entries, b.entries)):
        return False
    if a.y is not None and a.y > b.y:  # type: ignore[operator]
        return False
    return True


@dataclass(frozen=True)
class Evidence:
    """Observed values for a subset of the variables (possibly empty)."""

    observed: Assignment = Assignment()

    @classmethod
    def of(cls, values: Mapping[int, int] | None = None, y: int | None = None) -> "Evidence":
        return cls(Assignment.of(values, y))

    @classmethod
    def empty(cls) -> "Evidence":
        return cls(Assignment())

    @property
    def is_empty(self) -> bool:
        return not self.observed.entries and self.observed.y is None

    @property
    def y(self) -> int | None:
        return self.observed.y

    def cause_items(self) -> tuple[tuple[int, int], ...]:
        return self.observed.entries

    def __str__(self) -> str:
        parts = [f"X{i}={v}" for i, v in self.observed.entries]
        if self.observed.y is not None:
            parts.append(f"Y={self.observed.y}")
        return " ".join(parts) if parts else "(empty)"


# ---------------------------------------------------------------------------
# candidate sets


@dataclass(frozen=True)
class CandidateSet:
    """A sorted index set of candidate root-cause variables.

    The empty tuple is the dedicated marker for "no root cause" (the outcome
    caused itself); every other operation requires a nonempty set.
    """

    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        idx = self.indices
        if list(idx) != sorted(set(idx)):
            raise ModelError("candidate indices must be strictly increasing")
        if any(i < 1 for i in idx):
            raise ModelError("candidate indices must be >= 1")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "CandidateSet":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    @classmethod
    def none(cls) -> "CandidateSet":
        return cls(())

    @property
    def is_no_root_cause(self) -> bool:
        return not self.indices

    def label(self, names: Sequence[str] | None = None) -> str:
        if self.is_no_root_cause:
            return "none"
        if names is None:
            inner = ",".join(f"X{i}" for i in self.indices)
        else:
            inner = ",".join(names[i - 1] for i in self.indices)
        return "{" + inner + "}"

    def __str__(self) -> str:
        return self.label()


NO_ROOT_CAUSE = CandidateSet.none()


def as_candidate(k: CandidateSet | Iterable[int]) -> CandidateSet:
    return k if isinstance(k, CandidateSet) else CandidateSet.of(k)


def partition_candidate(
    k: CandidateSet | Iterable[int], p: int
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Split ``{1..p}`` around a candidate set into (prefix, gap, suffix).

    prefix: indices strictly before the smallest candidate; gap: indices
    between the smallest and largest candidate that are not candidates;
    suffix: indices strictly after the largest candidate.  Together with the
    candidate set these partition ``{1..p}``.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        raise ModelError("partition_candidate requires a nonempty candidate set")
    idx = cand.indices
    if idx[-1] > p:
        raise ModelError(f"candidate index {idx[-1]} out of range for p={p}")
    lo, hi = idx[0], idx[-1]
    members = set(idx)
    prefix = tuple(range(1, lo))
    gap = tuple(j for j in range(lo + 1, hi) if j not in members)
    suffix = tuple(range(hi + 1, p + 1))
    return prefix, gap, suffix


# ---------------------------------------------------------------------------
# networks


@dataclass(frozen=True)
class Network:
    """A binary causal Bayesian network over causes ``X_1..X_p`` (topological
    order) plus one outcome variable with no children.

    ``parents[i-1]`` lists the parent indices of cause ``i`` (all strictly
    smaller than ``i``); ``cpt[i-1]`` holds ``P(X_i = 1 | parents)`` for every
    parent row, indexed by the packed parent bits.  The outcome has its own
    parent set and table.
    """

    names: tuple[str, ...]
    parents: tuple[tuple[int, ...], ...]
    cpt: tuple[tuple[float, ...], ...]
    outcome_name: str
    outcome_parents: tuple[int, ...]
    outcome_cpt: tuple[float, ...]

    def __post_init__(self) -> None:
        p = len(self.names)
        if p < 1:
            raise ModelError("network needs at least one cause variable")
        if len(set(self.names)) != p or self.outcome_name in self.names:
            raise ModelError("variable names must be distinct")
        if len(self.parents) != p or len(self.cpt) != p:
            raise ModelError("parents/cpt length must match the number of causes")
        for i in range(1, p + 1):
            pars = self.parents[i - 1]
            if list(pars) != sorted(set(pars)):
                raise ModelError(f"parents of {self.names[i-1]} must be sorted and distinct")
            if any(not (1 <= q < i) for q in pars):
                raise ModelError(
                    f"parents of {self.names[i-1]} must precede it in topological order"
                )
            self._check_table(self.cpt[i - 1], len(pars), self.names[i - 1])
        op = self.outcome_parents
        if list(op) != sorted(set(op)) or any(not (1 <= q <= p) for q in op):
            raise ModelError("outcome parents must be a sorted subset of the causes")
        if not op:
            raise ModelError("outcome must be a descendant of the causes")
        self._check_table(self.outcome_cpt, len(op), self.outcome_name)

    @staticmethod
    def _check_table(table: Sequence[float], n_parents: int, name: str) -> None:
        if len(table) != 1 << n_parents:
            raise ModelError(
                f"CPT of {name} needs exactly one row per parent assignment "
                f"({1 << n_parents} expected, {len(table)} given)"
            )
        for row, prob in enumerate(table):
            if not (0.0 <= prob <= 1.0):
                raise ModelError(f"CPT row {row:b} of {name} is outside [0,1]: {prob}")

    @property
    def p(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        """1-based index of a cause name (the outcome is not indexed)."""
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise ModelError(f"unknown variable {name!r}") from None

    def row_index(self, parents: Sequence[int], x: Sequence[int]) -> int:
        """CPT row for the given total bit tuple ``x`` (0-based positions)."""
        r = 0
        for q in parents:
            r = (r << 1) | x[q - 1]
        return r

    def prob_one(self, i: int, x: Sequence[int]) -> float:
        """``P(X_i = 1 | predecessors)`` for a total bit tuple ``x``.

        Only the parent coordinates of ``x`` are read, which by the local
        Markov property equals the conditional on all predecessors.
        """
        return self.cpt[i - 1][self.row_index(self.parents[i - 1], x)]

    def outcome_prob_one(self, x: Sequence[int]) -> float:
        """``P(Y = 1 | X = x)`` for a total bit tuple ``x``."""
        return self.outcome_cpt[self.row_index(self.outcome_parents, x)]


# ---------------------------------------------------------------------------
# monotonicity validation


@dataclass(frozen=True)
class MonotonicityViolation:
    """One offending covering pair in a CPT: flipping ``flipped_parent`` from
    0 to 1 decreased ``P(variable = 1 | parents)``."""

    variable: str
    flipped_parent: str
    low_row: tuple[int, ...]
    high_row: tuple[int, ...]
    low_prob: float
    high_prob: float

    def __str__(self) -> str:
        low = "".join(map(str, self.low_row)) or "-"
        high = "".join(map(str, self.high_row)) or "-"
        return (
            f"{self.variable}: P(=1 | {low}) = {self.low_prob} exceeds "
            f"P(=1 | {high}) = {self.high_prob} after raising {self.flipped_parent}"
        )


def _table_violations(
    table: Sequence[float], parents: Sequence[int], names: Sequence[str], child: str
) -> list[MonotonicityViolation]:
    # Checking covering pairs of the parent lattice suffices by transitivity.
    k = len(parents)
    out = []
    for row in range(1 << k):
        for j in range(k):
            bit = 1 << (k - 1 - j)
            if row & bit:
                continue
            high = row | bit
            if table[row] > table[high]:
                out.append(
                    MonotonicityViolation(
                        variable=child,
                        flipped_parent=names[parents[j] - 1],
                        low_row=unpack_bits(row, k),
                        high_row=unpack_bits(high, k),
                        low_prob=table[row],
                        high_prob=table[high],
                    )
                )
    return out


def validate_monotone_cpt(net: Network) -> list[MonotonicityViolation]:
    """Check that every conditional table is non-decreasing in its parents.

    Returns the (possibly empty) list of violations; never raises.  An empty
    report means the observational law is compatible with causal mechanisms
    that are never preventive.
    """
    violations: list[MonotonicityViolation] = []
    for i in range(1, net.p + 1):
        violations.extend(
            _table_violations(net.cpt[i - 1], net.parents[i - 1], net.names, net.names[i - 1])
        )
    violations.extend(
        _table_violations(net.outcome_cpt, net.outcome_parents, net.names, net.outcome_name)
    )
    return violations
