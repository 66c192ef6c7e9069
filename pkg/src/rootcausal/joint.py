"""Exact observational inference by full enumeration.

Every operation enumerates the ``2^(p+1)`` total assignments in lexicographic
order (``x_1`` most significant, outcome fastest), which keeps results
bit-for-bit reproducible.  Exactness is the point here; the enumeration is
hard-capped rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import Assignment, CandidateSet, Evidence, Network, as_candidate, unpack_bits

ENUMERATION_CAP = 24  # refuse joint enumeration beyond 2^24 cause assignments

NORMALIZATION_TOL = 1e-12


class ImpossibleEvidenceError(ValueError):
    """The conditioning evidence has probability zero under the network."""


class EnumerationCapError(ValueError):
    """The network is too large for exact enumeration."""


def _require_small(net: Network) -> None:
    if net.p > ENUMERATION_CAP:
        raise EnumerationCapError(
            f"exact enumeration supports at most p={ENUMERATION_CAP} causes, got p={net.p}"
        )


def joint_prob(net: Network, x: Assignment | Sequence[int], y: int) -> float:
    """``P(X = x, Y = y)`` via the chain-rule factorization."""
    bits = x.bits(net.p) if isinstance(x, Assignment) else tuple(x)
    if len(bits) != net.p:
        raise ValueError(f"need a total assignment over 1..{net.p}")
    if y not in (0, 1):
        raise ValueError("y must be 0 or 1")
    prob = 1.0
    for i in range(1, net.p + 1):
        p1 = net.prob_one(i, bits)
        prob *= p1 if bits[i - 1] else 1.0 - p1
    py = net.outcome_prob_one(bits)
    return prob * (py if y else 1.0 - py)


def _prob_one_by_mask(net: Network, i: int) -> np.ndarray:
    """``P(X_i = 1 | .)`` for every packed total assignment (shape 2^p)."""
    p = net.p
    masks = np.arange(1 << p, dtype=np.int64)
    pars = net.parents[i - 1]
    rows = np.zeros(1 << p, dtype=np.int64)
    for q in pars:
        rows = (rows << 1) | ((masks >> (p - q)) & 1)
    return np.asarray(net.cpt[i - 1], dtype=float)[rows]


def _outcome_prob_by_mask(net: Network) -> np.ndarray:
    p = net.p
    masks = np.arange(1 << p, dtype=np.int64)
    rows = np.zeros(1 << p, dtype=np.int64)
    for q in net.outcome_parents:
        rows = (rows << 1) | ((masks >> (p - q)) & 1)
    return np.asarray(net.outcome_cpt, dtype=float)[rows]


def joint_table(net: Network) -> np.ndarray:
    """Joint probabilities ``P(X = x, Y = y)`` as an array of shape (2^p, 2).

    Row ``m`` is the assignment whose packed bits equal ``m``; column is the
    outcome value.
    """
    _require_small(net)
    p = net.p
    masks = np.arange(1 << p, dtype=np.int64)
    px = np.ones(1 << p, dtype=float)
    for i in range(1, p + 1):
        p1 = _prob_one_by_mask(net, i)
        xi = ((masks >> (p - i)) & 1).astype(float)
        px *= np.where(xi > 0, p1, 1.0 - p1)
    py = _outcome_prob_by_mask(net)
    return np.stack([px * (1.0 - py), px * py], axis=1)


def evidence_weights(net: Network, e: Evidence) -> np.ndarray:
    """Normalized ``P(X = x, Y = y | E = e)`` of shape (2^p, 2).

    Assignments inconsistent with the evidence carry weight zero.  Raises
    :class:`ImpossibleEvidenceError` when the evidence itself has
    probability zero.
    """
    table = joint_table(net)
    p = net.p
    masks = np.arange(1 << p, dtype=np.int64)
    keep = np.ones(1 << p, dtype=bool)
    for idx, val in e.cause_items():
        if not 1 <= idx <= p:
            raise ValueError(f"evidence index {idx} out of range for p={p}")
        keep &= ((masks >> (p - idx)) & 1) == val
    table = np.where(keep[:, None], table, 0.0)
    if e.y is not None:
        table[:, 1 - e.y] = 0.0
    total = float(table.sum())
    if total <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {e} has probability zero under the network")
    return table / total


@dataclass(frozen=True)
class ConditionalTable:
    """The conditional law ``P(X, Y | E = e)`` as explicit weighted rows.

    Entries cover every total assignment consistent with the evidence, in
    lexicographic order; weights are normalized to sum to one within
    ``NORMALIZATION_TOL``.
    """

    entries: tuple[tuple[Assignment, float], ...]
    evidence: Evidence

    def total_weight(self) -> float:
        return float(sum(w for _, w in self.entries))


def condition_on_evidence(net: Network, e: Evidence) -> ConditionalTable:
    """Enumerate the conditional distribution given the evidence."""
    weights = evidence_weights(net, e)
    p = net.p
    entries = []
    for m in range(1 << p):
        bits = unpack_bits(m, p)
        for y in (0, 1):
            w = float(weights[m, y])
            keep = all(bits[i - 1] == v for i, v in e.cause_items())
            if e.y is not None and y != e.y:
                keep = False
            if keep:
                entries.append((Assignment.total(bits, y), w))
    table = ConditionalTable(tuple(entries), e)
    assert abs(table.total_weight() - 1.0) <= NORMALIZATION_TOL
    return table


def posterior_event_prob(
    net: Network,
    k: CandidateSet | Iterable[int],
    mode: str,
    e: Evidence,
) -> float:
    """Posterior probability that the candidate variables are all one
    (``mode="all-one"``) or that at least one is (``mode="any-one"``)."""
    cand = as_candidate(k)
    if cand.is_no_root_cause:
        raise ValueError("posterior_event_prob requires a nonempty candidate set")
    if mode not in ("all-one", "any-one"):
        raise ValueError(f"mode must be 'all-one' or 'any-one', got {mode!r}")
    weights = evidence_weights(net, e)
    p = net.p
    masks = np.arange(1 << p, dtype=np.int64)
    hits = np.ones(1 << p, dtype=bool) if mode == "all-one" else np.zeros(1 << p, dtype=bool)
    for idx in cand.indices:
        bit = ((masks >> (p - idx)) & 1) == 1
        hits = (hits & bit) if mode == "all-one" else (hits | bit)
    return float(weights[hits].sum())
