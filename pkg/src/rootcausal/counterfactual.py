"""Structural-equation counterfactual engine.

A structural model here is, per variable, a finite mixture of deterministic
response functions of its parents; one joint choice of response functions (a
latent cell) fixes every potential outcome of an individual, and the mixture
weights give the population law.  Exact enumeration of the cells therefore
evaluates any counterfactual quantity without approximation, which is what
makes this module usable as an independent oracle for the closed-form engine.

The mixture selections are independent across variables, and the canonical
construction and the random generator only emit monotone response functions.
Hand-built models with non-monotone responses still evaluate correctly under
the definitional ("scan") indicator methods, but no identification claims
attach to them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .joint import ImpossibleEvidenceError
from .model import (
    Assignment,
    CandidateSet,
    Evidence,
    ModelError,
    Network,
    as_candidate,
    partition_candidate,
    validate_monotone_cpt,
)

CELL_CAP = 10**8  # refuse enumeration beyond this many latent cells
_CHUNK_CELLS = 1 << 21  # vectorized slabs stay below ~2M cells


class CellCapExceededError(ValueError):
    """The latent-cell product is too large for exact enumeration."""


class MonotonicityError(ValueError):
    """An operation that requires monotone mechanisms was given a model
    violating it."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


# ---------------------------------------------------------------------------
# model types


@dataclass(frozen=True)
class Mechanism:
    """Mixture of deterministic response functions for one variable.

    ``responses[j]`` maps a packed parent row to an output bit; ``weights[j]``
    is the probability of drawing that response, stored exactly so implied
    conditional tables reproduce without rounding drift.
    """

    parents: tuple[int, ...]
    responses: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.responses or len(self.responses) != len(self.weights):
            raise ModelError("mechanism needs matching, nonempty responses and weights")
        rows = 1 << len(self.parents)
        for table in self.responses:
            if len(table) != rows or any(b not in (0, 1) for b in table):
                raise ModelError("response tables must be 0/1 with one entry per parent row")
        if any(w <= 0 for w in self.weights):
            raise ModelError("response weights must be positive")
        if sum(self.weights) != 1:
            raise ModelError("response weights must sum to one exactly")

    @property
    def n_responses(self) -> int:
        return len(self.responses)

    def is_monotone(self) -> bool:
        k = len(self.parents)
        for table in self.responses:
            for row in range(1 << k):
                for j in range(k):
                    bit = 1 << (k - 1 - j)
                    if not row & bit and table[row] > table[row | bit]:
                        return False
        return True


@dataclass(frozen=True)
class MonotoneSEM:
    """A structural model over causes 1..p plus the outcome.

    The name records the contract of the constructors in this module; the
    evaluation operations themselves do not assume monotonicity.
    """

    names: tuple[str, ...]
    outcome_name: str
    mechanisms: tuple[Mechanism, ...]
    outcome: Mechanism

    def __post_init__(self) -> None:
        p = len(self.names)
        if len(self.mechanisms) != p:
            raise ModelError("need one mechanism per cause variable")
        for i, mech in enumerate(self.mechanisms, start=1):
            if any(not (1 <= q < i) for q in mech.parents):
                raise ModelError(f"mechanism of {self.names[i-1]} has non-topological parents")
        if any(not (1 <= q <= p) for q in self.outcome.parents):
            raise ModelError("outcome parents out of range")

    @property
    def p(self) -> int:
        return len(self.names)

    def all_mechanisms(self) -> tuple[Mechanism, ...]:
        return self.mechanisms + (self.outcome,)

    def cell_count(self) -> int:
        n = 1
        for mech in self.all_mechanisms():
            n *= mech.n_responses
        return n

    def is_monotone(self) -> bool:
        return _sem_is_monotone(self)

    def iter_cells(self) -> Iterator["LatentCell"]:
        """All latent cells with their exact weights, in lexicographic order."""
        if self.cell_count() > CELL_CAP:
            raise CellCapExceededError(
                f"{self.cell_count()} latent cells exceed the cap of {CELL_CAP}"
            )
        mechs = self.all_mechanisms()
        for choices in itertools.product(*(range(m.n_responses) for m in mechs)):
            w = Fraction(1)
            for mech, c in zip(mechs, choices):
                w *= mech.weights[c]
            yield LatentCell(choices, float(w))


@lru_cache(maxsize=256)
def _sem_is_monotone(sem: MonotoneSEM) -> bool:
    return all(m.is_monotone() for m in sem.all_mechanisms())


@dataclass(frozen=True)
class LatentCell:
    """One joint choice of response functions; the unit over which every
    counterfactual quantity is deterministic."""

    choices: tuple[int, ...]
    weight: float

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ModelError("latent cells carry positive weight")


@dataclass(frozen=True)
class IndicatorPair:
    """Cause / root indicator bits for one candidate set under one cell."""

    cause: int
    root: int

    @property
    def is_root_cause(self) -> bool:
        return bool(self.cause and self.root)


def _choices(cell: LatentCell | Sequence[int]) -> tuple[int, ...]:
    return cell.choices if isinstance(cell, LatentCell) else tuple(cell)


# ---------------------------------------------------------------------------
# single-cell evaluation (readable reference path)


def eval_under_intervention(
    sem: MonotoneSEM,
    cell: LatentCell | Sequence[int],
    do: Mapping[int, int] | None = None,
) -> Assignment:
    """Propagate one latent cell through the structural equations.

    Intervened variables take their forced value; free variables apply their
    selected response to the realized parent values, in topological order,
    outcome last.  Consistency and composition hold by construction.
    """
    choices = _choices(cell)
    do = dict(do or {})
    p = sem.p
    values: list[int] = []
    for i in range(1, p + 1):
        if i in do:
            values.append(do[i] & 1)
        else:
            mech = sem.mechanisms[i - 1]
            row = 0
            for q in mech.parents:
                row = (row << 1) | values[q - 1]
            values.append(mech.responses[choices[i - 1]][row])
    row = 0
    for q in sem.outcome.parents:
        row = (row << 1) | values[q - 1]
    y = sem.outcome.responses[choices[p]][row]
    return Assignment.total(values, y)


def _resolve_method(sem: MonotoneSEM, method: str) -> str:
    if method == "auto":
        return "monotone" if sem.is_monotone() else "scan"
    if method not in ("scan", "monotone"):
        raise ValueError(f"method must be 'auto', 'scan', or 'monotone', got {method!r}")
    return method


def cause_indicator(
    sem: MonotoneSEM,
    cell: LatentCell | Sequence[int],
    k: CandidateSet | Iterable[int],
    method: str = "auto",
) -> int:
    """1 iff some pair of interventions on the candidate set changes the
    outcome for this cell.

    ``method="scan"`` checks every setting of the candidate variables;
    ``method="monotone"`` compares only all-zeros against all-ones, which is
    equivalent whenever the model is monotone.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        raise ModelError("cause_indicator requires a nonempty candidate set")
    method = _resolve_method(sem, method)
    idx = cand.indices
    if method == "monotone":
        y0 = eval_under_intervention(sem, cell, {i: 0 for i in idx}).y
        y1 = eval_under_intervention(sem, cell, {i: 1 for i in idx}).y
        return int(y0 != y1)
    seen = set()
    for bits in itertools.product((0, 1), repeat=len(idx)):
        seen.add(eval_under_intervention(sem, cell, dict(zip(idx, bits))).y)
        if len(seen) > 1:
            return 1
    return 0


def root_indicator(
    sem: MonotoneSEM,
    cell: LatentCell | Sequence[int],
    k: CandidateSet | Iterable[int],
    method: str = "auto",
) -> int:
    """1 iff no intervention upstream of the candidate set reaches the
    outcome through it.

    For each setting ``u`` of the prefix-and-gap variables, the candidate
    values realized under ``do(upstream = u)`` are read off first, and only
    the candidate set is then intervened to that readout -- everything else,
    including the upstream variables, is left at its natural value in the
    second stage.  The indicator is 1 when the resulting outcome does not
    depend on ``u``, and 1 by convention when the candidate set has no
    upstream variables at all.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        raise ModelError("root_indicator requires a nonempty candidate set")
    method = _resolve_method(sem, method)
    idx = cand.indices
    prefix, gap, _ = partition_candidate(cand, sem.p)
    upstream = prefix + gap
    if not upstream:
        return 1
    if method == "monotone":
        settings: Iterable[tuple[int, ...]] = ((0,) * len(upstream), (1,) * len(upstream))
    else:
        settings = itertools.product((0, 1), repeat=len(upstream))
    seen = set()
    for u in settings:
        stage1 = eval_under_intervention(sem, cell, dict(zip(upstream, u)))
        readout = {i: stage1.value(i) for i in idx}
        seen.add(eval_under_intervention(sem, cell, readout).y)
        if len(seen) > 1:
            return 0
    return 1


def indicator_pair(
    sem: MonotoneSEM,
    cell: LatentCell | Sequence[int],
    k: CandidateSet | Iterable[int],
    method: str = "auto",
) -> IndicatorPair:
    return IndicatorPair(
        cause=cause_indicator(sem, cell, k, method),
        root=root_indicator(sem, cell, k, method),
    )


# ---------------------------------------------------------------------------
# vectorized cell enumeration


class _CellGrid:
    """Broadcast evaluation of all latent cells at once.

    Each variable owns one axis of a virtual (n_1, ..., n_p, n_Y) grid; a
    world under a fixed intervention is a set of integer arrays over that
    grid.  When the grid would be too large, leading axes are fixed one
    response at a time and the reductions stream over the chunks in a fixed
    order, so results stay deterministic.
    """

    def __init__(self, sem: MonotoneSEM):
        if sem.cell_count() > CELL_CAP:
            raise CellCapExceededError(
                f"{sem.cell_count()} latent cells exceed the cap of {CELL_CAP}"
            )
        self.sem = sem
        self.p = sem.p
        self._natural: dict[tuple[int, ...], list] = {}
        mechs = sem.all_mechanisms()
        self.counts = [m.n_responses for m in mechs]
        self.tables = [np.asarray(m.responses, dtype=np.int8) for m in mechs]
        self.wvecs = [np.asarray([float(w) for w in m.weights]) for m in mechs]
        # fix enough leading axes that the remaining block stays small
        n_axes = len(self.counts)
        tail = 1
        cut = n_axes
        while cut > 0 and tail * self.counts[cut - 1] <= _CHUNK_CELLS:
            cut -= 1
            tail *= self.counts[cut]
        self.cut = cut

    def _axis_index(self, axis: int, fixed: Sequence[int]):
        if axis < self.cut:
            return fixed[axis]
        n_axes = len(self.counts)
        shape = [1] * (n_axes - self.cut)
        shape[axis - self.cut] = self.counts[axis]
        return np.arange(self.counts[axis]).reshape(shape)

    def chunks(self) -> Iterator[tuple[int, ...]]:
        yield from itertools.product(*(range(n) for n in self.counts[: self.cut]))

    def weight(self, fixed: Sequence[int]):
        w: np.ndarray | float = 1.0
        for axis in range(len(self.counts)):
            if axis < self.cut:
                w = w * self.wvecs[axis][fixed[axis]]
            else:
                w = w * self.wvecs[axis][self._axis_index(axis, fixed)]
        return w

    def worlds(self, do: Mapping[int, object], fixed: Sequence[int]) -> list:
        """Values of X_1..X_p and the outcome (outcome last) for every cell
        in the chunk; intervention values may be scalars or cell arrays."""
        values: list = []
        for i in range(1, self.p + 1):
            if i in do:
                values.append(do[i])
                continue
            mech = self.sem.mechanisms[i - 1]
            row: object = 0
            for q in mech.parents:
                row = (row << 1) | values[q - 1]
            values.append(self.tables[i - 1][self._axis_index(i - 1, fixed), row])
        row = 0
        for q in self.sem.outcome.parents:
            row = (row << 1) | values[q - 1]
        values.append(self.tables[self.p][self._axis_index(self.p, fixed), row])
        return values

    def natural_worlds(self, fixed: tuple[int, ...]) -> list:
        got = self._natural.get(fixed)
        if got is None:
            got = self._natural[fixed] = self.worlds({}, fixed)
        return got

    def evidence_mask(self, e: Evidence, natural: list):
        mask: np.ndarray | bool = True
        for i, val in e.cause_items():
            if not 1 <= i <= self.p:
                raise ValueError(f"evidence index {i} out of range for p={self.p}")
            mask = mask & (natural[i - 1] == val)
        if e.y is not None:
            mask = mask & (natural[self.p] == e.y)
        return mask


@lru_cache(maxsize=64)
def _grid_for(sem: MonotoneSEM) -> _CellGrid:
    return _CellGrid(sem)


def _masked_expectation(
    sem: MonotoneSEM,
    e: Evidence,
    quantity: Callable[[_CellGrid, tuple[int, ...], list], object],
) -> float:
    """E[quantity | e] over the cell law; spans the chunked grid."""
    grid = _grid_for(sem)
    num = 0.0
    den = 0.0
    for fixed in grid.chunks():
        w = grid.weight(fixed)
        natural = grid.natural_worlds(fixed)
        mask = grid.evidence_mask(e, natural)
        wm = w * mask
        den += float(np.sum(wm))
        num += float(np.sum(wm * quantity(grid, fixed, natural)))
    if den <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {e} has probability zero under the model")
    return num / den


# ---------------------------------------------------------------------------
# oracle attribution measures


def oracle_prc(
    sem: MonotoneSEM,
    k: CandidateSet | Iterable[int],
    e: Evidence = Evidence.empty(),
    method: str = "auto",
) -> float:
    """Probability, given the evidence, that the candidate set is a root
    cause of the outcome: both indicator bits hold.

    The no-root-cause marker is served through the complement of the full
    cause set, which it equals identically.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        return 1.0 - oracle_prc(sem, CandidateSet.of(range(1, sem.p + 1)), e, method)
    method = _resolve_method(sem, method)
    idx = cand.indices
    prefix, gap, _ = partition_candidate(cand, sem.p)
    upstream = prefix + gap

    def quantity(grid: _CellGrid, fixed: tuple[int, ...], natural: list):
        cause = _grid_cause(grid, fixed, idx, method)
        root = _grid_root(grid, fixed, idx, upstream, method)
        return cause & root

    return _masked_expectation(sem, e, quantity)


def _grid_cause(grid: _CellGrid, fixed, idx, method):
    if method == "monotone":
        y0 = grid.worlds({i: 0 for i in idx}, fixed)[-1]
        y1 = grid.worlds({i: 1 for i in idx}, fixed)[-1]
        return np.not_equal(y0, y1).astype(np.int8)
    settings = list(itertools.product((0, 1), repeat=len(idx)))
    ys = [grid.worlds(dict(zip(idx, bits)), fixed)[-1] for bits in settings]
    differs = np.zeros((), dtype=bool)
    for y in ys[1:]:
        differs = differs | np.not_equal(y, ys[0])
    return differs.astype(np.int8)


def _grid_root(grid: _CellGrid, fixed, idx, upstream, method):
    if not upstream:
        return np.int8(1)
    if method == "monotone":
        settings: list[tuple[int, ...]] = [(0,) * len(upstream), (1,) * len(upstream)]
    else:
        settings = list(itertools.product((0, 1), repeat=len(upstream)))
    ys = []
    for u in settings:
        stage1 = grid.worlds(dict(zip(upstream, u)), fixed)
        readout = {i: stage1[i - 1] for i in idx}
        ys.append(grid.worlds(readout, fixed)[-1])
    same = np.ones((), dtype=bool)
    for y in ys[1:]:
        same = same & np.equal(y, ys[0])
    return same.astype(np.int8)


def _normalize_set(sem: MonotoneSEM, k) -> tuple[int, ...]:
    idx = (k,) if isinstance(k, int) else as_candidate(k).indices
    if not idx:
        raise ModelError("candidate set must be nonempty")
    if idx[-1] > sem.p:
        raise ModelError(f"candidate index {idx[-1]} out of range for p={sem.p}")
    return idx


def oracle_posttce(
    sem: MonotoneSEM,
    k: int | CandidateSet | Iterable[int],
    e: Evidence = Evidence.empty(),
) -> float:
    """Posterior total causal effect: expected outcome contrast between
    forcing the candidate variables all to one and all to zero."""
    idx = _normalize_set(sem, k)

    def quantity(grid, fixed, natural):
        y1 = grid.worlds({i: 1 for i in idx}, fixed)[-1]
        y0 = grid.worlds({i: 0 for i in idx}, fixed)[-1]
        return y1.astype(np.int16) - y0.astype(np.int16)

    return _masked_expectation(sem, e, quantity)


def oracle_postdce(
    sem: MonotoneSEM,
    k: int,
    e: Evidence = Evidence.empty(),
    baseline: Mapping[int, int] | None = None,
) -> float:
    """Posterior direct causal effect of variable ``k`` with the downstream
    variables pinned to a baseline.

    The baseline must cover every index after ``k``; when the evidence
    already fixes all of them it is used by default.
    """
    if not 1 <= k <= sem.p:
        raise ModelError(f"index {k} out of range for p={sem.p}")
    suffix = tuple(range(k + 1, sem.p + 1))
    if baseline is None:
        observed = dict(e.cause_items())
        if any(j not in observed for j in suffix):
            raise ValueError(
                "baseline for the downstream variables is required when the "
                "evidence does not fix them all"
            )
        baseline = {j: observed[j] for j in suffix}
    else:
        baseline = {int(j): int(v) for j, v in baseline.items()}
        if sorted(baseline) != list(suffix):
            raise ValueError(f"baseline must cover exactly the indices {suffix}")

    def quantity(grid, fixed, natural):
        ya = grid.worlds(dict(baseline), fixed)[-1]
        yb = grid.worlds({k: 0, **baseline}, fixed)[-1]
        return ya.astype(np.int16) - yb.astype(np.int16)

    return _masked_expectation(sem, e, quantity)


def oracle_pn(sem: MonotoneSEM, e: Evidence) -> float:
    """Probability of necessity for the full cause vector: the chance the
    outcome would have been absent under do(X = 0), given evidence that
    includes X = 1 and a present outcome."""
    observed = dict(e.cause_items())
    if e.y != 1 or any(observed.get(i) != 1 for i in range(1, sem.p + 1)):
        raise ValueError("probability of necessity needs evidence with every cause = 1 and Y = 1")

    def quantity(grid, fixed, natural):
        y0 = grid.worlds({i: 0 for i in range(1, sem.p + 1)}, fixed)[-1]
        return (y0 == 0).astype(np.int8)

    return _masked_expectation(sem, e, quantity)


def oracle_pc(sem: MonotoneSEM) -> float:
    """Probability of causation for the full cause vector: conditioning is on
    the potential outcome under do(X = 1), not on observed evidence."""
    grid = _grid_for(sem)
    num = 0.0
    den = 0.0
    ones = {i: 1 for i in range(1, sem.p + 1)}
    zeros = {i: 0 for i in range(1, sem.p + 1)}
    for fixed in grid.chunks():
        w = grid.weight(fixed)
        y1 = grid.worlds(ones, fixed)[-1]
        y0 = grid.worlds(zeros, fixed)[-1]
        den += float(np.sum(w * (y1 == 1)))
        num += float(np.sum(w * ((y1 == 1) & (y0 == 0))))
    if den <= 0.0:
        raise ValueError("conditioning event (outcome present under do(X=1)) has probability zero")
    return num / den


# ---------------------------------------------------------------------------
# constructions


def canonical_sem_from_network(net: Network) -> MonotoneSEM:
    """The single-threshold coupling consistent with the network's law.

    Sorting the distinct rows of each conditional table cuts [0,1] into
    intervals; each interval becomes the response "fire on every parent row
    at least this likely", weighted by its length.  Any mixture of monotone
    responses with the same implied tables yields identical attribution
    values under the model assumptions, so this one convenient coupling
    serves as the exact oracle.
    """
    violations = validate_monotone_cpt(net)
    if violations:
        offender = violations[0].variable
        raise MonotonicityError(
            f"CPT of {offender} is not monotone; the threshold construction "
            "would produce non-monotone responses",
            violations,
        )
    mechanisms = tuple(
        _threshold_mechanism(net.parents[i - 1], net.cpt[i - 1]) for i in range(1, net.p + 1)
    )
    outcome = _threshold_mechanism(net.outcome_parents, net.outcome_cpt)
    return MonotoneSEM(
        names=net.names,
        outcome_name=net.outcome_name,
        mechanisms=mechanisms,
        outcome=outcome,
    )


def _threshold_mechanism(parents: Sequence[int], table: Sequence[float]) -> Mechanism:
    responses: list[tuple[int, ...]] = []
    weights: list[Fraction] = []
    prev = Fraction(0)
    for v in sorted(set(table)):
        fv = Fraction(v)
        if fv <= prev:
            continue
        responses.append(tuple(int(row >= v) for row in table))
        weights.append(fv - prev)
        prev = fv
    if prev < 1:
        responses.append((0,) * len(table))
        weights.append(Fraction(1) - prev)
    return Mechanism(parents=tuple(parents), responses=tuple(responses), weights=tuple(weights))


def sem_to_cpt(sem: MonotoneSEM) -> Network:
    """The observational law implied by a structural model, as a network."""
    cpts = []
    for mech in sem.mechanisms:
        rows = 1 << len(mech.parents)
        cpts.append(
            tuple(
                float(sum(w for w, table in zip(mech.weights, mech.responses) if table[row]))
                for row in range(rows)
            )
        )
    out_rows = 1 << len(sem.outcome.parents)
    outcome_cpt = tuple(
        float(
            sum(w for w, table in zip(sem.outcome.weights, sem.outcome.responses) if table[row])
        )
        for row in range(out_rows)
    )
    return Network(
        names=sem.names,
        parents=tuple(m.parents for m in sem.mechanisms),
        cpt=tuple(cpts),
        outcome_name=sem.outcome_name,
        outcome_parents=sem.outcome.parents,
        outcome_cpt=outcome_cpt,
    )


_WEIGHT_GRID = 10**6  # random weights live on a fixed decimal grid


def _random_monotone_table(rng: np.random.Generator, n_parents: int) -> tuple[int, ...]:
    rows = 1 << n_parents
    density = rng.uniform(0.15, 0.85)
    bits = (rng.random(rows) < density).astype(np.int8)
    # upward closure: a row fires if any row below it (componentwise) fires
    for row in range(rows):
        for j in range(n_parents):
            bit = 1 << (n_parents - 1 - j)
            if row & bit and bits[row ^ bit]:
                bits[row] = 1
    return tuple(int(b) for b in bits)


def _random_mechanism(
    rng: np.random.Generator, parents: Sequence[int], max_responses: int
) -> Mechanism:
    n = int(rng.integers(1, max_responses + 1))
    merged: dict[tuple[int, ...], Fraction] = {}
    raw = rng.multinomial(_WEIGHT_GRID - n, np.full(n, 1.0 / n)) + 1
    for j in range(n):
        table = _random_monotone_table(rng, len(parents))
        w = Fraction(int(raw[j]), _WEIGHT_GRID)
        merged[table] = merged.get(table, Fraction(0)) + w
    tables = sorted(merged)
    return Mechanism(
        parents=tuple(parents),
        responses=tuple(tables),
        weights=tuple(merged[t] for t in tables),
    )


def random_monotone_sem(
    p: int,
    parent_structure: tuple[Sequence[Sequence[int]], Sequence[int]] | None = None,
    seed: int | np.random.SeedSequence = 0,
    max_parents: int = 3,
    max_responses: int = 4,
) -> MonotoneSEM:
    """Seeded random structural model with monotone response mixtures.

    ``parent_structure`` optionally pins the DAG as ``(cause_parents,
    outcome_parents)``; otherwise a random topologically-ordered DAG is
    drawn.  Weights live on a fixed decimal grid so the implied conditional
    tables round-trip through the text format exactly.
    """
    if p < 1:
        raise ModelError("p must be at least 1")
    rng = np.random.default_rng(seed)
    if parent_structure is None:
        cause_parents = []
        for i in range(1, p + 1):
            cap = min(i - 1, max_parents)
            size = int(rng.integers(0, cap + 1))
            pars = sorted(rng.choice(np.arange(1, i), size=size, replace=False)) if size else []
            cause_parents.append(tuple(int(q) for q in pars))
        out_size = int(rng.integers(1, min(p, max_parents) + 1))
        outcome_parents = tuple(
            int(q) for q in sorted(rng.choice(np.arange(1, p + 1), size=out_size, replace=False))
        )
    else:
        cause_parents = [tuple(int(q) for q in pars) for pars in parent_structure[0]]
        outcome_parents = tuple(int(q) for q in parent_structure[1])
    mechanisms = tuple(
        _random_mechanism(rng, cause_parents[i - 1], max_responses) for i in range(1, p + 1)
    )
    outcome = _random_mechanism(rng, outcome_parents, max_responses)
    return MonotoneSEM(
        names=tuple(f"X{i}" for i in range(1, p + 1)),
        outcome_name="Y",
        mechanisms=mechanisms,
        outcome=outcome,
    )


def sample_worlds(sem: MonotoneSEM, n: int, rng: np.random.Generator) -> np.ndarray:
    """Forward-sample ``n`` natural worlds; columns are X_1..X_p then the
    outcome.  Used for Monte-Carlo soundness checks of the generators."""
    out = np.empty((n, sem.p + 1), dtype=np.int8)
    for i in range(1, sem.p + 1):
        mech = sem.mechanisms[i - 1]
        choice = rng.choice(mech.n_responses, size=n, p=[float(w) for w in mech.weights])
        rows = np.zeros(n, dtype=np.int64)
        for q in mech.parents:
            rows = (rows << 1) | out[:, q - 1]
        out[:, i - 1] = np.asarray(mech.responses, dtype=np.int8)[choice, rows]
    mech = sem.outcome
    choice = rng.choice(mech.n_responses, size=n, p=[float(w) for w in mech.weights])
    rows = np.zeros(n, dtype=np.int64)
    for q in mech.parents:
        rows = (rows << 1) | out[:, q - 1]
    out[:, sem.p] = np.asarray(mech.responses, dtype=np.int8)[choice, rows]
    return out
