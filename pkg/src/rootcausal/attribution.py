"""Candidate ranking reports and chain-cell classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import closedform, counterfactual
from .counterfactual import CellCapExceededError, LatentCell, MonotoneSEM
from .joint import posterior_event_prob
from .model import CandidateSet, Evidence, ModelError, Network, as_candidate
from .netformat import network_fingerprint

ENGINES = ("closed", "oracle", "both")


@dataclass(frozen=True)
class ReportRow:
    candidate: CandidateSet
    prc: float
    posttce: float | None  # None for the no-root-cause row
    posterior: float | None
    engine: str
    discrepancy: float | None = None  # |closed - oracle| when both engines ran


@dataclass(frozen=True)
class AttributionReport:
    rows: tuple[ReportRow, ...]
    evidence: Evidence
    fingerprint: str
    engine: str
    warnings: tuple[str, ...] = field(default=())

    def row(self, candidate: CandidateSet | Iterable[int]) -> ReportRow:
        cand = as_candidate(candidate)
        for r in self.rows:
            if r.candidate == cand:
                return r
        raise KeyError(cand)

    def max_discrepancy(self) -> float:
        deltas = [r.discrepancy for r in self.rows if r.discrepancy is not None]
        return max(deltas) if deltas else 0.0


def default_candidates(net: Network) -> list[CandidateSet]:
    """All singletons, all prefix sets, and the no-root-cause marker.

    Prefix sets are the family whose root condition holds automatically, so
    they are the natural multi-variable candidates to scan alongside the
    singletons."""
    out: list[CandidateSet] = []
    seen = set()
    for i in range(1, net.p + 1):
        cand = CandidateSet.of([i])
        out.append(cand)
        seen.add(cand.indices)
    for k in range(2, net.p + 1):
        cand = CandidateSet.of(range(1, k + 1))
        if cand.indices not in seen:
            out.append(cand)
            seen.add(cand.indices)
    out.append(CandidateSet.none())
    return out


def _sort_key(net: Network, row: ReportRow):
    marker = (net.p + 1,) if row.candidate.is_no_root_cause else row.candidate.indices
    return (-row.prc, marker)


def rank_candidates(
    net: Network,
    candidates: Sequence[CandidateSet | Iterable[int]] | None = None,
    e: Evidence = Evidence.empty(),
    engine: str = "closed",
) -> AttributionReport:
    """Attribution table over the candidates: root-cause probability by the
    selected engine, posterior total effect by the structural oracle, and
    the posterior probability that any candidate variable is on.

    Rows are sorted by descending root-cause probability (candidate order
    breaks ties); a no-root-cause row is always present.  When the latent
    cell cap rules the oracle out, the report falls back to the closed form
    and says so in its warnings.
    """
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    cands = [as_candidate(c) for c in (candidates if candidates is not None else default_candidates(net))]
    if not cands:
        raise ValueError("need at least one candidate")
    if not any(c.is_no_root_cause for c in cands):
        cands.append(CandidateSet.none())

    warnings: list[str] = []
    sem: MonotoneSEM | None = None
    try:
        sem = counterfactual.canonical_sem_from_network(net)
        if sem.cell_count() > counterfactual.CELL_CAP:
            raise CellCapExceededError(f"{sem.cell_count()} cells")
    except CellCapExceededError as exc:
        sem = None
        warnings.append(f"oracle disabled, cell cap exceeded ({exc}); closed-form used")

    effective = engine
    if engine in ("oracle", "both") and sem is None:
        effective = "closed"

    rows = []
    for cand in cands:
        closed_value = None
        oracle_value = None
        if effective in ("closed", "both"):
            closed_value = closedform.prc(net, cand, e)
        if effective in ("oracle", "both"):
            oracle_value = counterfactual.oracle_prc(sem, cand, e)
        if effective == "closed":
            value, disc = closed_value, None
        elif effective == "oracle":
            value, disc = oracle_value, None
        else:
            value, disc = closed_value, abs(closed_value - oracle_value)
        if cand.is_no_root_cause:
            posttce = None
            posterior = None
        else:
            posttce = counterfactual.oracle_posttce(sem, cand, e) if sem is not None else None
            if sem is None:
                warnings.append(
                    f"posterior total effect unavailable for {cand.label(net.names)}"
                )
            posterior = posterior_event_prob(net, cand, "any-one", e)
        rows.append(
            ReportRow(
                candidate=cand,
                prc=float(value),
                posttce=posttce,
                posterior=posterior,
                engine=effective,
                discrepancy=disc,
            )
        )
    rows.sort(key=lambda r: _sort_key(net, r))
    return AttributionReport(
        rows=tuple(rows),
        evidence=e,
        fingerprint=network_fingerprint(net),
        engine=effective,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# chain classification


def _require_chain(sem: MonotoneSEM) -> None:
    if sem.mechanisms[0].parents != ():
        raise ModelError("not a chain: the first variable must be a root")
    for i in range(2, sem.p + 1):
        if sem.mechanisms[i - 1].parents != (i - 1,):
            raise ModelError(f"not a chain: X{i} must have exactly the parent X{i-1}")
    if sem.outcome.parents != (sem.p,):
        raise ModelError("not a chain: the outcome must hang off the last cause")


def classify_chain_cell(sem: MonotoneSEM, cell: LatentCell | Sequence[int]) -> CandidateSet:
    """Root-cause label of one latent cell on a chain model.

    On a chain, a variable can be moved by interventions exactly when its
    selected response is non-constant.  The root cause is therefore the
    deepest variable that cannot be moved while everything strictly after it
    (outcome included) can; if the outcome itself cannot be moved there is
    no root cause.  Agrees with the indicator pair for every singleton.
    """
    _require_chain(sem)
    choices = cell.choices if isinstance(cell, LatentCell) else tuple(cell)
    movable = [False]  # the first variable has no ancestors to move it
    for i in range(2, sem.p + 1):
        table = sem.mechanisms[i - 1].responses[choices[i - 1]]
        movable.append(table[0] != table[1])
    y_table = sem.outcome.responses[choices[sem.p]]
    if y_table[0] == y_table[1]:
        return CandidateSet.none()
    deepest_fixed = max(i for i in range(1, sem.p + 1) if not movable[i - 1])
    return CandidateSet.of([deepest_fixed])
