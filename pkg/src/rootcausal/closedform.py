"""Closed-form root-cause probabilities from the observational law alone.

Given a monotone network, the probability that a candidate set is the root
cause of a present outcome, conditional on a fully observed world, reduces to
a finite sum over pairs of comparable assignments sandwiched under the
observation.  Evidence coarser than a full observation is handled by mixing
those fully-observed values under the conditional law, and an absent outcome
is handled by complementing every variable (which maps the problem back onto
the present-outcome formula).

Two implementations of the summation live here: a scalar one that follows the
derivation term by term, and a vectorized one used by the evidence mixture.
They are checked against each other, and both against the structural-equation
oracle.
"""

from __future__ import annotations

import itertools
from decimal import Decimal
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .joint import _outcome_prob_by_mask, _prob_one_by_mask, evidence_weights, joint_table
from .counterfactual import MonotonicityError
from .model import (
    Assignment,
    CandidateSet,
    Evidence,
    Network,
    as_candidate,
    partition_candidate,
    validate_monotone_cpt,
)

PRC_RANGE_SLACK = 1e-9  # accumulated float error allowed outside [0, 1]


class ImpossibleObservationError(ValueError):
    """The observed world has probability zero, so conditioning on it is
    undefined."""


def _require_monotone(net: Network) -> None:
    violations = validate_monotone_cpt(net)
    if violations:
        raise MonotonicityError(
            f"closed-form identification needs monotone tables; "
            f"CPT of {violations[0].variable} is not monotone",
            violations,
        )


def _total_bits(net: Network, x: Assignment | Sequence[int]) -> tuple[int, ...]:
    if isinstance(x, Assignment):
        return x.bits(net.p)
    bits = tuple(int(b) for b in x)
    if len(bits) != net.p or any(b not in (0, 1) for b in bits):
        raise ValueError(f"need a total 0/1 assignment over 1..{net.p}")
    return bits


# ---------------------------------------------------------------------------
# complement (tilde) transform


def _complement_prob(v: float) -> float:
    # Complement on the decimal value, so that flipping twice is the identity
    # for every probability the text format can represent.
    return float(Decimal(1) - Decimal(repr(v)))


def flip_network(
    net: Network, x: Assignment | Sequence[int] | None = None
) -> tuple[Network, tuple[int, ...] | None]:
    """The complemented model: every variable's 0 and 1 are swapped.

    Each table row maps to the row with all parent bits flipped, with the
    probability complemented; parent sets and ordering are unchanged, and
    flipping twice returns the original network.  Complementing reverses the
    parent lattice together with the value order, so a monotone network flips
    to a monotone network.
    """
    flipped_cpt = []
    for i in range(1, net.p + 1):
        k = len(net.parents[i - 1])
        full = (1 << k) - 1
        table = net.cpt[i - 1]
        flipped_cpt.append(tuple(_complement_prob(table[full ^ r]) for r in range(1 << k)))
    k = len(net.outcome_parents)
    full = (1 << k) - 1
    out_cpt = tuple(_complement_prob(net.outcome_cpt[full ^ r]) for r in range(1 << k))
    flipped = Network(
        names=net.names,
        parents=net.parents,
        cpt=tuple(flipped_cpt),
        outcome_name=net.outcome_name,
        outcome_parents=net.outcome_parents,
        outcome_cpt=out_cpt,
    )
    if x is None:
        return flipped, None
    bits = _total_bits(net, x)
    return flipped, tuple(1 - b for b in bits)


@lru_cache(maxsize=256)
def _flipped_network(net: Network) -> Network:
    return flip_network(net)[0]


# ---------------------------------------------------------------------------
# fully-observed world, scalar path


def _summand_options(
    bits: Sequence[int], kidx: Sequence[int], rest: Sequence[int]
) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """Per free coordinate, the admissible (x'_i, x*_i) pairs.

    Coordinates observed at zero are pinned to (0, 0); candidate coordinates
    never carry x* = 1.  The options are ordered so that iterating their
    product enumerates the (x', x*) pairs in a fixed lexicographic order.
    """
    options: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    kset = set(kidx)
    for i in sorted(set(kidx) | set(rest)):
        if not bits[i - 1]:
            options.append((i, ((0, 0),)))
        elif i in kset:
            options.append((i, ((0, 0), (1, 0))))
        else:
            options.append((i, ((0, 0), (1, 0), (1, 1))))
    return options


def prc_full_obs(
    net: Network,
    k: CandidateSet | Iterable[int],
    x: Assignment | Sequence[int],
    y: int = 1,
) -> float:
    """Root-cause probability of a candidate set given one fully observed
    world ``(X = x, Y = y)``.

    Evaluates the identification sum directly: each summand pairs an upper
    assignment x' with a lower assignment x* (prefix coordinates inherit the
    observation, candidate coordinates drop to zero in x*), weighs the
    outcome-table contrast between them, and multiplies per-coordinate ratio
    factors that account for the candidate readouts and the downstream
    variables.  An absent outcome is routed through :func:`flip_network`.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        full = CandidateSet.of(range(1, net.p + 1))
        return 1.0 - prc_full_obs(net, full, x, y)
    _require_monotone(net)
    bits = _total_bits(net, x)
    if y not in (0, 1):
        raise ValueError("y must be 0 or 1")
    if y == 0:
        flipped, fbits = flip_network(net, bits)
        return prc_full_obs(flipped, cand, fbits, 1)

    denom_y = net.outcome_prob_one(bits)
    if denom_y <= 0.0:
        raise ImpossibleObservationError("P(Y=1 | X=x) is zero for the observed x")
    for i in range(1, net.p + 1):
        if bits[i - 1] and net.prob_one(i, bits) <= 0.0:
            raise ImpossibleObservationError(
                f"X{i}=1 observed but P(X{i}=1 | predecessors) is zero"
            )

    kidx = cand.indices
    if kidx[-1] > net.p:
        raise ValueError(f"candidate index {kidx[-1]} out of range for p={net.p}")
    prefix, gap, suffix = partition_candidate(cand, net.p)
    rest = gap + suffix
    options = _summand_options(bits, kidx, rest)
    kset = set(kidx)

    total = 0.0
    for choice in itertools.product(*(opts for _, opts in options)):
        xp = list(bits)
        xs = list(bits)
        for (i, _), (a, b) in zip(options, choice):
            xp[i - 1] = a
            xs[i - 1] = b
        # candidate coordinates of the companion assignment keep x', every
        # coordinate upstream of the candidate block drops to zero
        xpp = [0] * net.p
        for i in kidx:
            xpp[i - 1] = xp[i - 1]
        term = (net.outcome_prob_one(xp) - net.outcome_prob_one(xs)) / denom_y
        for i in kidx:
            if not bits[i - 1]:
                continue
            ratio = net.prob_one(i, xpp) / net.prob_one(i, bits)
            term *= ratio if xp[i - 1] else 1.0 - ratio
        for i in rest:
            if not bits[i - 1]:
                continue
            d = net.prob_one(i, bits)
            r_up = net.prob_one(i, xp) / d
            r_low = net.prob_one(i, xs) / d
            if xp[i - 1] == 0:
                term *= 1.0 - r_up
            elif xs[i - 1] == 0:
                term *= r_up - r_low
            else:
                term *= r_low
        total += term
    assert -PRC_RANGE_SLACK <= total <= 1.0 + PRC_RANGE_SLACK, (
        f"identification sum left [0,1]: {total}"
    )
    return total


# ---------------------------------------------------------------------------
# fully-observed world, vectorized over every x at once


def _safe_reciprocal(arr: np.ndarray) -> np.ndarray:
    # zero entries only ever multiply zero coefficients or masked-out worlds
    return np.divide(1.0, arr, out=np.zeros_like(arr), where=arr > 0)


@lru_cache(maxsize=4096)
def _prc_table_y1(net: Network, cand: CandidateSet) -> np.ndarray:
    """PRC(candidate | X = x, Y = 1) for every packed assignment x.

    Entries for worlds with zero joint probability are NaN; callers mix the
    table under a conditional law that puts no weight there.
    """
    p = net.p
    n = 1 << p
    prefix, gap, suffix = partition_candidate(cand, p)
    kidx = cand.indices
    rest = gap + suffix
    options = _summand_options((1,) * p, kidx, rest)  # widest option lists
    free = [i for i, _ in options]

    patterns = list(itertools.product(*(opts for _, opts in options)))
    n_pat = len(patterns)
    pat_up = np.zeros(n_pat, dtype=np.int64)
    pat_low = np.zeros(n_pat, dtype=np.int64)
    for s, choice in enumerate(patterns):
        for i, (a, b) in zip(free, choice):
            if a:
                pat_up[s] |= 1 << (p - i)
            if b:
                pat_low[s] |= 1 << (p - i)

    kmask = 0
    for i in kidx:
        kmask |= 1 << (p - i)
    barmask = 0
    for i in prefix:
        barmask |= 1 << (p - i)

    masks = np.arange(n, dtype=np.int64)
    m_up = pat_up[:, None] | (masks[None, :] & barmask)
    m_low = pat_low[:, None] | (masks[None, :] & barmask)
    m_k = pat_up & kmask  # upstream coordinates zeroed, per pattern only
    valid = (pat_up[:, None] & ~masks[None, :]) == 0

    py = _outcome_prob_by_mask(net)
    py_inv = _safe_reciprocal(py)
    term = np.where(valid, (py[m_up] - py[m_low]) * py_inv[None, :], 0.0)

    for i in kidx:
        p1 = _prob_one_by_mask(net, i)
        d_inv = _safe_reciprocal(p1)
        ratio = p1[m_k][:, None] * d_inv[None, :]
        up_bit = (pat_up >> (p - i)) & 1
        fac = np.where(up_bit[:, None] == 1, ratio, 1.0 - ratio)
        observed_one = ((masks >> (p - i)) & 1) == 1
        term *= np.where(observed_one[None, :], fac, 1.0)
    for i in rest:
        p1 = _prob_one_by_mask(net, i)
        d_inv = _safe_reciprocal(p1)
        r_up = p1[m_up] * d_inv[None, :]
        r_low = p1[m_low] * d_inv[None, :]
        up_bit = ((pat_up >> (p - i)) & 1)[:, None] == 1
        low_bit = ((pat_low >> (p - i)) & 1)[:, None] == 1
        fac = np.where(up_bit, np.where(low_bit, r_low, r_up - r_low), 1.0 - r_up)
        observed_one = ((masks >> (p - i)) & 1) == 1
        term *= np.where(observed_one[None, :], fac, 1.0)

    out = term.sum(axis=0)
    positive = joint_table(net)[:, 1] > 0
    return np.where(positive, out, np.nan)


# ---------------------------------------------------------------------------
# evidence mixture


def prc(
    net: Network,
    k: CandidateSet | Iterable[int],
    e: Evidence = Evidence.empty(),
) -> float:
    """Root-cause probability under arbitrary evidence.

    Mixes the fully-observed values under the conditional law of (X, Y)
    given the evidence; worlds with zero weight are skipped.  The
    no-root-cause marker returns the complement of the full cause set.
    """
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        return 1.0 - prc(net, CandidateSet.of(range(1, net.p + 1)), e)
    _require_monotone(net)
    if cand.indices[-1] > net.p:
        raise ValueError(f"candidate index {cand.indices[-1]} out of range for p={net.p}")
    weights = evidence_weights(net, e)

    total = 0.0
    w1 = weights[:, 1]
    if w1.any():
        table1 = _prc_table_y1(net, cand)
        live = w1 > 0
        total += float(table1[live] @ w1[live])
    w0 = weights[:, 0]
    if w0.any():
        table0 = _prc_table_y1(_flipped_network(net), cand)
        n = 1 << net.p
        flipped_masks = (n - 1) ^ np.arange(n)
        live = w0 > 0
        total += float(table0[flipped_masks][live] @ w0[live])
    assert -PRC_RANGE_SLACK <= total <= 1.0 + PRC_RANGE_SLACK
    return total


def prc_posttce_scaling(net: Network, k: int, x: Assignment | Sequence[int]) -> float:
    """The factor turning the posterior total causal effect of a single
    variable into its root-cause probability, for a fully observed world.

    For root variables the factor is the observed value itself, so the two
    measures coincide there.
    """
    if not 1 <= k <= net.p:
        raise ValueError(f"index {k} out of range for p={net.p}")
    bits = _total_bits(net, x)
    if not bits[k - 1]:
        return 0.0
    numerator = net.prob_one(k, (0,) * net.p)
    denominator = net.prob_one(k, bits)
    if denominator <= 0.0:
        raise ImpossibleObservationError(
            f"X{k}=1 observed but P(X{k}=1 | predecessors) is zero"
        )
    return numerator / denominator
