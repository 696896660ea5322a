"""Plain-text network format and dataset CSV I/O.

Network files are line based:

    # comment
    var NAME ARITY LABEL...
    arc PARENT CHILD
    cpt CHILD | P1=label P2=label ... : p1 p2 ... pK
    cpt CHILD | : p1 p2 ... pK          (root variable)

Variables must be declared before any arc or cpt line that names them.
CPT rows whose sum drifts from one by at most ROW_SUM_TOL are renormalised
silently; beyond that the file is rejected.  Probabilities are written with
17 significant digits so that parse(serialize(net)) is an exact fixed point.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .model import (
    ROW_SUM_TOL,
    BayesNet,
    DagStructure,
    Dataset,
    Variable,
)

__all__ = [
    "NetworkSyntaxError",
    "UnknownVariable",
    "RowSumNotOne",
    "MissingCptRow",
    "DatasetFormatError",
    "HeaderMismatch",
    "UnknownStateLabel",
    "MissingValue",
    "NetworkDocument",
    "parse_network",
    "parse_structure",
    "serialize_network",
    "parse_dataset",
    "write_dataset",
    "load_alarm",
    "alarm_path",
]

# Keep float bits on parse when a row is this close to one; renormalise
# quietly up to ROW_SUM_TOL, reject beyond it.
_EXACT_ROW_TOL = 1e-12


class NetworkSyntaxError(ValueError):
    """A malformed line in a network file."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class UnknownVariable(NetworkSyntaxError):
    """An arc or cpt line names a variable with no preceding var line."""


class RowSumNotOne(NetworkSyntaxError):
    """A CPT row sums too far from one to renormalise."""

    def __init__(self, line: int, variable: str, config: int, total: float):
        self.variable = variable
        self.config = config
        self.total = total
        super().__init__(
            line,
            f"cpt row for {variable!r} (config {config}) sums to {total!r}",
        )


class MissingCptRow(NetworkSyntaxError):
    """A variable is missing one or more CPT rows."""


class DatasetFormatError(ValueError):
    """Base class for dataset CSV failures."""


class HeaderMismatch(DatasetFormatError):
    """The CSV header does not name exactly the schema's variables."""


class UnknownStateLabel(DatasetFormatError):
    """A cell value matches neither a state label nor a valid state index."""

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: unknown state {value!r}")


class MissingValue(DatasetFormatError):
    """A row is missing a value; datasets must be complete."""

    def __init__(self, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: missing value")


@dataclass(frozen=True)
class NetworkDocument:
    """A parsed network plus the source line of each var declaration."""

    net: BayesNet
    var_lines: dict[str, int]

    @property
    def structure(self) -> DagStructure:
        return self.net.structure


def _tokenize(text: str):
    """Yield (line number, tokens) for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _parse_lines(text: str):
    """First pass: declarations and arcs in order, cpt lines collected."""
    order: list[str] = []
    variables: dict[str, Variable] = {}
    var_lines: dict[str, int] = {}
    parents: dict[str, list[str]] = {}
    cpt_lines: list[tuple[int, list[str]]] = []

    for lineno, tokens in _tokenize(text):
        kind = tokens[0]
        if kind == "var":
            if len(tokens) < 3:
                raise NetworkSyntaxError(lineno, "var needs a name and an arity")
            name = tokens[1]
            if name in variables:
                raise NetworkSyntaxError(lineno, f"variable {name!r} declared twice")
            try:
                arity = int(tokens[2])
            except ValueError:
                raise NetworkSyntaxError(
                    lineno, f"arity must be an integer, got {tokens[2]!r}"
                ) from None
            labels = tuple(tokens[3:])
            if labels and len(labels) != arity:
                raise NetworkSyntaxError(
                    lineno, f"{len(labels)} labels for arity {arity}"
                )
            try:
                variables[name] = Variable(name, arity, labels)
            except ValueError as exc:
                raise NetworkSyntaxError(lineno, str(exc)) from None
            var_lines[name] = lineno
            order.append(name)
            parents[name] = []
        elif kind == "arc":
            if len(tokens) != 3:
                raise NetworkSyntaxError(lineno, "arc needs exactly two names")
            parent, child = tokens[1], tokens[2]
            for name in (parent, child):
                if name not in variables:
                    raise UnknownVariable(
                        lineno, f"arc names undeclared variable {name!r}"
                    )
            if parent in parents[child]:
                raise NetworkSyntaxError(
                    lineno, f"duplicate arc {parent} -> {child}"
                )
            parents[child].append(parent)
        elif kind == "cpt":
            if len(tokens) < 2:
                raise NetworkSyntaxError(lineno, "cpt needs a variable name")
            if tokens[1] not in variables:
                raise UnknownVariable(
                    lineno, f"cpt names undeclared variable {tokens[1]!r}"
                )
            cpt_lines.append((lineno, tokens))
        else:
            raise NetworkSyntaxError(lineno, f"unknown directive {kind!r}")

    return order, variables, var_lines, parents, cpt_lines


def _build_structure(order, variables, parents) -> DagStructure:
    index = {name: i for i, name in enumerate(order)}
    return DagStructure(
        tuple(variables[name] for name in order),
        tuple(tuple(index[p] for p in parents[name]) for name in order),
    )


def parse_structure(text: str) -> DagStructure:
    """Parse only var and arc lines; cpt lines are ignored if present."""
    order, variables, _, parents, _ = _parse_lines(text)
    if not order:
        raise NetworkSyntaxError(0, "no variables declared")
    return _build_structure(order, variables, parents)


def _parse_cpt_row(lineno, tokens, structure, index):
    """Decode one cpt line into (variable index, config index, row values)."""
    child = tokens[1]
    i = index[child]
    rest = tokens[2:]
    if not rest or rest[0] != "|":
        raise NetworkSyntaxError(lineno, "cpt line must read 'cpt NAME | ... : ...'")
    try:
        colon = rest.index(":")
    except ValueError:
        raise NetworkSyntaxError(lineno, "cpt line is missing ':'") from None
    condition, value_tokens = rest[1:colon], rest[colon + 1:]

    assigned: dict[int, int] = {}
    for tok in condition:
        if "=" not in tok:
            raise NetworkSyntaxError(lineno, f"condition {tok!r} is not NAME=label")
        pname, _, label = tok.partition("=")
        if pname not in index:
            raise UnknownVariable(lineno, f"condition names undeclared variable {pname!r}")
        p = index[pname]
        if p not in structure.parents[i]:
            raise NetworkSyntaxError(
                lineno, f"{pname!r} is not a parent of {child!r}"
            )
        if p in assigned:
            raise NetworkSyntaxError(lineno, f"parent {pname!r} assigned twice")
        try:
            assigned[p] = structure.variables[p].state_index(label)
        except ValueError:
            raise NetworkSyntaxError(
                lineno, f"variable {pname!r} has no state labelled {label!r}"
            ) from None
    missing = [p for p in structure.parents[i] if p not in assigned]
    if missing:
        names = ", ".join(structure.variables[p].name for p in missing)
        raise NetworkSyntaxError(lineno, f"cpt row for {child!r} leaves {names} unassigned")

    config = 0
    for p in structure.parents[i]:
        config = config * structure.variables[p].arity + assigned[p]

    arity = structure.variables[i].arity
    if len(value_tokens) != arity:
        raise NetworkSyntaxError(
            lineno, f"{len(value_tokens)} probabilities for arity {arity}"
        )
    try:
        row = np.array([float(t) for t in value_tokens])
    except ValueError:
        raise NetworkSyntaxError(lineno, "probabilities must be numeric") from None
    if np.any(~np.isfinite(row)) or row.min() < 0.0 or row.max() > 1.0:
        raise NetworkSyntaxError(lineno, "probabilities must lie in [0, 1]")
    return i, config, row


def parse_network(text: str) -> NetworkDocument:
    """Parse a full network file into a validated BayesNet."""
    order, variables, var_lines, parents, cpt_lines = _parse_lines(text)
    if not order:
        raise NetworkSyntaxError(0, "no variables declared")
    structure = _build_structure(order, variables, parents)
    index = {name: i for i, name in enumerate(order)}

    cpts = [
        np.full((structure.parent_config_count(i), v.arity), np.nan)
        for i, v in enumerate(structure.variables)
    ]
    for lineno, tokens in cpt_lines:
        i, config, row = _parse_cpt_row(lineno, tokens, structure, index)
        if not np.isnan(cpts[i][config]).all():
            raise NetworkSyntaxError(
                lineno,
                f"duplicate cpt row for {structure.variables[i].name!r} "
                f"(config {config})",
            )
        total = float(row.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise RowSumNotOne(lineno, structure.variables[i].name, config, total)
        if abs(total - 1.0) > _EXACT_ROW_TOL:
            row = row / total
        cpts[i][config] = row

    for i, v in enumerate(structure.variables):
        holes = np.where(np.isnan(cpts[i]).any(axis=1))[0]
        if holes.size:
            raise MissingCptRow(
                var_lines[v.name],
                f"variable {v.name!r} is missing {holes.size} cpt row(s), "
                f"first missing config {int(holes[0])}",
            )

    net = BayesNet(structure, tuple(cpts))
    return NetworkDocument(net, var_lines)


def _format_prob(p: float) -> str:
    return format(float(p), ".17g")


def serialize_network(net: BayesNet) -> str:
    """Render a network in the line format; parse(serialize(net)) == net."""
    structure = net.structure
    out: list[str] = []
    for v in structure.variables:
        out.append(f"var {v.name} {v.arity} " + " ".join(v.state_labels))
    for i, v in enumerate(structure.variables):
        for p in structure.parents[i]:
            out.append(f"arc {structure.variables[p].name} {v.name}")
    for i, v in enumerate(structure.variables):
        ps = structure.parents[i]
        arities = [structure.variables[p].arity for p in ps]
        for config in range(structure.parent_config_count(i)):
            digits = []
            rem = config
            for r in reversed(arities):
                digits.append(rem % r)
                rem //= r
            digits.reverse()
            condition = " ".join(
                f"{structure.variables[p].name}={structure.variables[p].state_labels[d]}"
                for p, d in zip(ps, digits)
            )
            values = " ".join(_format_prob(x) for x in net.cpts[i][config])
            out.append(f"cpt {v.name} | {condition + ' ' if condition else ''}: {values}")
    return "\n".join(out) + "\n"


def _looks_like_index(value: str) -> bool:
    return value.isdigit()


def parse_dataset(text: str, schema: tuple[Variable, ...]) -> Dataset:
    """Read a dataset CSV against a known schema.

    The header must name exactly the schema's variables (any order; columns
    are reordered to match).  Cells hold state labels; a purely numeric cell
    is read as a 0-based state index only when none of that variable's
    labels is itself purely numeric.
    """
    schema = tuple(schema)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise HeaderMismatch("dataset has no header row") from None
    names = [v.name for v in schema]
    if sorted(header) != sorted(names):
        raise HeaderMismatch(
            f"header {header!r} does not match schema variables {names!r}"
        )
    by_name = {v.name: v for v in schema}
    columns = [by_name[h] for h in header]
    numeric_ok = {
        v.name: not any(_looks_like_index(lab) for lab in v.state_labels)
        for v in schema
    }

    rows: list[list[int]] = []
    for rownum, cells in enumerate(reader, start=1):
        if not cells:
            continue
        if len(cells) > len(header):
            raise DatasetFormatError(
                f"row {rownum}: {len(cells)} cells for {len(header)} columns"
            )
        row = []
        for k, v in enumerate(columns):
            cell = cells[k].strip() if k < len(cells) else ""
            if not cell:
                raise MissingValue(rownum, v.name)
            if cell in v.state_labels:
                row.append(v.state_labels.index(cell))
            elif numeric_ok[v.name] and _looks_like_index(cell):
                state = int(cell)
                if not 0 <= state < v.arity:
                    raise UnknownStateLabel(rownum, v.name, cell)
                row.append(state)
            else:
                raise UnknownStateLabel(rownum, v.name, cell)
        rows.append(row)

    arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(schema)) if rows else []
    data = Dataset(tuple(columns), arr)
    if header == names:
        return data
    return data.project([header.index(n) for n in names])


def write_dataset(data: Dataset) -> str:
    """Render a dataset as CSV with state labels and LF line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([v.name for v in data.variables])
    labels = [v.state_labels for v in data.variables]
    for case in data.cases:
        writer.writerow([labels[k][s] for k, s in enumerate(case)])
    return buf.getvalue()


def alarm_path() -> Path:
    """Filesystem path of the bundled ALARM network file."""
    return Path(str(resources.files("bnscore").joinpath("data/alarm.bn")))


def load_alarm() -> NetworkDocument:
    """Parse the bundled ALARM monitoring network (37 variables, 46 arcs)."""
    text = resources.files("bnscore").joinpath("data/alarm.bn").read_text()
    return parse_network(text)
