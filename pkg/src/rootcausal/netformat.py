"""Line-oriented text format for networks, evidence, and candidate sets.

A document has four sections.  ``#`` starts a comment anywhere on a line.

    [variables]        # one name per line, declaration order = topological
    X1
    X2
    Y                  # the outcome is declared last

    [outcome]          # names exactly one variable
    Y

    [parents]          # child: parent parent ...   (omitted child = root)
    X2: X1
    Y: X2

    [cpt]              # child | parent-bits = probability
    X1 | - = 0.3       # roots use '-' for the empty bit string
    X2 | 0 = 0.2
    X2 | 1 = 0.8
    Y | 0 = 0.1
    Y | 1 = 0.9

Parent bits follow the child's declared parent order, first parent leftmost;
probabilities are plain decimals with at most 12 fractional digits and are
converted to binary floating point exactly once.  Serialization emits a
canonical form: parents sorted by index, rows in lexicographic bit order,
probabilities printed with the fewest digits that round-trip (quantized onto
the 12-digit grid, which is the format's value space).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence

from .model import Assignment, CandidateSet, Evidence, ModelError, Network

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_PROB_RE = re.compile(r"^(?:\d+)(?:\.(\d{1,12}))?$")

SECTIONS = ("variables", "outcome", "parents", "cpt")


class ParseError(ValueError):
    """A diagnostic with a stable machine-readable code and a location."""

    def __init__(self, code: str, message: str, line: int, col: int = 1):
        super().__init__(f"{line}:{col}: [{code}] {message}")
        self.code = code
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class NetworkDocument:
    """A parsed document: raw text, the network, and where each CPT row and
    variable declaration came from (for downstream diagnostics)."""

    text: str
    network: Network
    locations: dict


def _strip(line: str) -> str:
    cut = line.find("#")
    return (line if cut < 0 else line[:cut]).rstrip()


def _col_of(line: str, token: str) -> int:
    at = line.find(token)
    return at + 1 if at >= 0 else 1


def parse_network(text: str) -> Network:
    return parse_document(text).network


def parse_document(text: str) -> NetworkDocument:
    """Parse a network document, raising :class:`ParseError` with a line,
    column, and error code on the first problem found."""
    order: list[str] = []
    var_lines: dict[str, int] = {}
    outcome_decls: list[tuple[str, int]] = []
    parent_decls: dict[str, tuple[list[str], int]] = {}
    cpt_rows: dict[str, dict[str, tuple[str, int, int]]] = {}
    locations: dict = {}

    section: str | None = None
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = _strip(raw)
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not (stripped.startswith("[") and stripped.endswith("]")):
                raise ParseError("bad-section", f"malformed section header {stripped!r}", lineno)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError("bad-section", f"unknown section {name!r}", lineno)
            section = name
            continue
        if section is None:
            raise ParseError("malformed-line", "content before the first section", lineno)

        if section == "variables":
            name = stripped
            if not _NAME_RE.match(name):
                raise ParseError("bad-name", f"invalid variable name {name!r}", lineno,
                                 _col_of(raw, name))
            if name in var_lines:
                raise ParseError("duplicate-variable", f"variable {name!r} declared twice",
                                 lineno, _col_of(raw, name))
            var_lines[name] = lineno
            order.append(name)
            locations[("variable", name)] = (lineno, _col_of(raw, name))
        elif section == "outcome":
            name = stripped
            if name not in var_lines:
                raise ParseError("unknown-variable", f"outcome {name!r} is not declared",
                                 lineno, _col_of(raw, name))
            outcome_decls.append((name, lineno))
        elif section == "parents":
            if ":" not in stripped:
                raise ParseError("malformed-line", "expected 'child: parent ...'", lineno)
            child, _, rest = stripped.partition(":")
            child = child.strip()
            if child not in var_lines:
                raise ParseError("unknown-variable", f"unknown variable {child!r}", lineno,
                                 _col_of(raw, child))
            if child in parent_decls:
                raise ParseError("duplicate-parents-decl",
                                 f"parents of {child!r} declared twice", lineno)
            parents = rest.split()
            seen: set[str] = set()
            for tok in parents:
                if tok not in var_lines:
                    raise ParseError("unknown-variable", f"unknown parent {tok!r}", lineno,
                                     _col_of(raw, tok))
                if tok in seen:
                    raise ParseError("duplicate-parent", f"parent {tok!r} repeated", lineno,
                                     _col_of(raw, tok))
                if order.index(tok) >= order.index(child):
                    raise ParseError("forward-parent-reference",
                                     f"parent {tok!r} does not precede {child!r}", lineno,
                                     _col_of(raw, tok))
                seen.add(tok)
            parent_decls[child] = (parents, lineno)
        elif section == "cpt":
            m = re.match(r"^(\S+)\s*\|\s*(\S+)\s*=\s*(\S+)$", stripped)
            if not m:
                raise ParseError("malformed-line",
                                 "expected 'child | parent-bits = probability'", lineno)
            child, bits, prob = m.groups()
            if child not in var_lines:
                raise ParseError("unknown-variable", f"unknown variable {child!r}", lineno,
                                 _col_of(raw, child))
            rows = cpt_rows.setdefault(child, {})
            if bits in rows:
                raise ParseError("duplicate-cpt-row",
                                 f"row {bits!r} of {child!r} given twice", lineno,
                                 _col_of(raw, bits))
            rows[bits] = (prob, lineno, _col_of(raw, prob))

    if not order:
        raise ParseError("empty-document", "no variables declared", max(last_line, 1))
    if not outcome_decls:
        raise ParseError("no-outcome", "document does not declare an outcome",
                         max(last_line, 1))
    if len(outcome_decls) > 1:
        raise ParseError("multiple-outcome", "more than one outcome declared",
                         outcome_decls[1][1])
    outcome, outcome_line = outcome_decls[0]
    if order[-1] != outcome:
        raise ParseError("outcome-not-last",
                         f"outcome {outcome!r} must be the last declared variable",
                         outcome_line)

    names = order[:-1]
    if not names:
        raise ParseError("empty-document", "need at least one cause variable",
                         var_lines[outcome])
    index = {name: i + 1 for i, name in enumerate(names)}

    for child, (parents, lineno) in parent_decls.items():
        if outcome in parents:
            raise ParseError("outcome-as-parent",
                             f"outcome {outcome!r} cannot be a parent", lineno)

    def table_for(child: str) -> tuple[tuple[int, ...], tuple[float, ...]]:
        declared = parent_decls.get(child, ([], var_lines[child]))[0]
        rows = cpt_rows.get(child, {})
        k = len(declared)
        want = [format(r, f"0{k}b") if k else "-" for r in range(1 << k)]
        for bits, (prob_tok, lineno, col) in rows.items():
            if bits not in want:
                raise ParseError("bad-bits",
                                 f"row {bits!r} does not match the {k} declared parents "
                                 f"of {child!r}", lineno)
        for bits in want:
            if bits not in rows:
                where = next(iter(rows.values()))[1] if rows else max(last_line, 1)
                raise ParseError("missing-cpt-row",
                                 f"missing CPT row {bits!r} for {child!r}", where)
        # remap from declared parent order to ascending index order
        sorted_parents = sorted(declared, key=lambda nm: index.get(nm, 0))
        perm = [declared.index(nm) for nm in sorted_parents]
        table = [0.0] * (1 << k)
        for bits in want:
            prob_tok, lineno, col = rows[bits]
            pm = _PROB_RE.match(prob_tok)
            if not pm:
                raise ParseError("bad-probability",
                                 f"probability {prob_tok!r} is not a plain decimal with "
                                 "at most 12 fractional digits", lineno, col)
            value = Decimal(prob_tok)
            if not (0 <= value <= 1):
                raise ParseError("probability-out-of-range",
                                 f"probability {prob_tok} outside [0,1]", lineno, col)
            if k:
                canon = 0
                for j in perm:
                    canon = (canon << 1) | int(bits[j])
            else:
                canon = 0
            table[canon] = float(value)
            locations[("cpt", child, bits)] = (lineno, col)
        parent_idx = tuple(index[nm] for nm in sorted_parents)
        return parent_idx, tuple(table)

    parents_out = []
    cpt_out = []
    for name in names:
        pars, table = table_for(name)
        if any(q >= index[name] for q in pars):
            raise ParseError("forward-parent-reference",
                             f"parents of {name!r} must precede it",
                             parent_decls[name][1])
        parents_out.append(pars)
        cpt_out.append(table)
    out_parents, out_cpt = table_for(outcome)

    try:
        network = Network(
            names=tuple(names),
            parents=tuple(parents_out),
            cpt=tuple(cpt_out),
            outcome_name=outcome,
            outcome_parents=out_parents,
            outcome_cpt=out_cpt,
        )
    except ModelError as exc:
        raise ParseError("invalid-network", str(exc), max(last_line, 1)) from exc
    return NetworkDocument(text=text, network=network, locations=locations)


# ---------------------------------------------------------------------------
# serialization


def format_probability(v: float) -> str:
    """Fewest decimal digits that reproduce ``v``, quantized to the format's
    12-digit grid when the shortest representation would be longer."""
    d = Decimal(repr(float(v)))
    if -d.as_tuple().exponent > 12:
        d = d.quantize(Decimal(1).scaleb(-12), rounding=ROUND_HALF_EVEN)
    out = format(d.normalize(), "f")
    return out if out else "0"


def serialize_network(net: Network) -> str:
    """Canonical text form: stable section order, topological declarations,
    lexicographic CPT rows.  A fixed point of parse-then-serialize."""
    lines = ["[variables]"]
    lines.extend(net.names)
    lines.append(net.outcome_name)
    lines.append("")
    lines.append("[outcome]")
    lines.append(net.outcome_name)
    lines.append("")
    lines.append("[parents]")
    for i, name in enumerate(net.names, start=1):
        pars = net.parents[i - 1]
        if pars:
            lines.append(f"{name}: " + " ".join(net.names[q - 1] for q in pars))
    lines.append(f"{net.outcome_name}: "
                 + " ".join(net.names[q - 1] for q in net.outcome_parents))
    lines.append("")
    lines.append("[cpt]")

    def rows(name: str, n_parents: int, table: Sequence[float]) -> None:
        for r in range(1 << n_parents):
            bits = format(r, f"0{n_parents}b") if n_parents else "-"
            lines.append(f"{name} | {bits} = {format_probability(table[r])}")

    for i, name in enumerate(net.names, start=1):
        rows(name, len(net.parents[i - 1]), net.cpt[i - 1])
    rows(net.outcome_name, len(net.outcome_parents), net.outcome_cpt)
    lines.append("")
    return "\n".join(lines)


def network_fingerprint(net: Network) -> str:
    """Content hash of the canonical serialized form."""
    return hashlib.sha256(serialize_network(net).encode("utf-8")).hexdigest()[:12]


# ---------------------------------------------------------------------------
# evidence and candidate parsing


def _known_names(net: Network) -> dict[str, int | None]:
    known: dict[str, int | None] = {name: i + 1 for i, name in enumerate(net.names)}
    known[net.outcome_name] = None  # outcome has no cause index
    return known


def parse_evidence(text: str, net: Network) -> Evidence:
    """Evidence strings are space-separated ``name=0|1`` tokens; the empty
    string is the empty evidence."""
    known = _known_names(net)
    values: dict[int, int] = {}
    y: int | None = None
    for tok in text.split():
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)=([01])$", tok)
        if not m:
            raise ParseError("bad-token", f"expected name=0|1, got {tok!r}", 1,
                             _col_of(text, tok))
        name, val = m.group(1), int(m.group(2))
        if name not in known:
            raise ParseError("unknown-variable", f"unknown variable {name!r}", 1,
                             _col_of(text, tok))
        idx = known[name]
        if idx is None:
            if y is not None:
                raise ParseError("duplicate-variable", f"{name!r} assigned twice", 1,
                                 _col_of(text, tok))
            y = val
        else:
            if idx in values:
                raise ParseError("duplicate-variable", f"{name!r} assigned twice", 1,
                                 _col_of(text, tok))
            values[idx] = val
    return Evidence(Assignment.of(values, y))


def parse_candidate(text: str, net: Network) -> CandidateSet:
    """Candidate sets are ``{name,name,...}`` or the literal ``none``."""
    token = text.strip()
    if token == "none":
        return CandidateSet.none()
    m = re.match(r"^\{([^{}]*)\}$", token)
    if not m:
        raise ParseError("bad-candidate",
                         f"expected {{name,...}} or 'none', got {text!r}", 1)
    inner = m.group(1).strip()
    if not inner:
        raise ParseError("bad-candidate", "candidate set cannot be empty; use 'none'", 1)
    known = _known_names(net)
    indices: list[int] = []
    for part in inner.split(","):
        name = part.strip()
        if name not in known:
            raise ParseError("unknown-variable", f"unknown variable {name!r}", 1,
                             _col_of(text, name))
        idx = known[name]
        if idx is None:
            raise ParseError("bad-candidate",
                             f"the outcome {name!r} cannot be a candidate", 1,
                             _col_of(text, name))
        if idx in indices:
            raise ParseError("duplicate-variable", f"{name!r} listed twice", 1,
                             _col_of(text, name))
        indices.append(idx)
    return CandidateSet.of(indices)


def evidence_label(e: Evidence, net: Network) -> str:
    """Round-trippable text form of evidence, cause indices mapped to names."""
    parts = [f"{net.names[i - 1]}={v}" for i, v in e.cause_items()]
    if e.y is not None:
        parts.append(f"{net.outcome_name}={e.y}")
    return " ".join(parts)


def candidate_label(k: CandidateSet, net: Network) -> str:
    return k.label(net.names)


def serialize_assignment_bits(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)
