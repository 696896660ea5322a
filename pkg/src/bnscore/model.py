"""Graphs, datasets, and counting for discrete Bayesian networks.

States are indexed 0..arity-1 internally; state labels exist for the I/O
boundary only.  Parent configurations and joint cells use mixed-radix
indexing with the first listed variable as the most significant digit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ModelError",
    "CycleDetected",
    "DuplicateParent",
    "SelfLoop",
    "StateOutOfRange",
    "IndexOutOfRange",
    "SchemaMismatch",
    "Variable",
    "DagStructure",
    "Dataset",
    "SufficientStats",
    "BayesNet",
    "CliqueDecomposition",
    "validate_dag",
    "parent_config_index",
    "count_sufficient_stats",
    "joint_cell_counts",
    "d_separated",
    "clique_decomposition",
    "ROW_SUM_TOL",
]

#: CPT rows must sum to one within this absolute tolerance.
ROW_SUM_TOL = 1e-9


class ModelError(ValueError):
    """Base class for graph and data validation failures."""


class CycleDetected(ModelError):
    """The directed graph contains a cycle."""


class DuplicateParent(ModelError):
    """A variable lists the same parent more than once."""


class SelfLoop(ModelError):
    """A variable lists itself as a parent."""


class StateOutOfRange(ModelError):
    """A state index falls outside a variable's 0..arity-1 range."""


class IndexOutOfRange(ModelError):
    """A variable index falls outside the structure's range."""


class SchemaMismatch(ModelError):
    """Dataset variables do not match the structure they are used with."""


@dataclass(frozen=True)
class Variable:
    """A discrete variable with a fixed, finite state space.

    ``state_labels`` defaults to "1".."arity" when omitted; labels must be
    distinct and there must be exactly one per state.
    """

    name: str
    arity: int
    state_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ModelError("variable name must be a non-empty string")
        if self.arity < 2:
            raise ModelError(
                f"variable {self.name!r}: arity must be at least 2, got {self.arity}"
            )
        labels = tuple(str(s) for s in self.state_labels)
        if not labels:
            labels = tuple(str(k + 1) for k in range(self.arity))
        object.__setattr__(self, "state_labels", labels)
        if len(labels) != self.arity:
            raise ModelError(
                f"variable {self.name!r}: {len(labels)} state labels for arity {self.arity}"
            )
        if len(set(labels)) != len(labels):
            raise ModelError(f"variable {self.name!r}: state labels must be distinct")

    def state_index(self, label: str) -> int:
        """Index of a state label; raises StateOutOfRange for unknown labels."""
        try:
            return self.state_labels.index(label)
        except ValueError:
            raise StateOutOfRange(
                f"variable {self.name!r} has no state labelled {label!r}"
            ) from None


def _find_cycle(parents: Sequence[Sequence[int]], names: Sequence[str]) -> list[str]:
    """Return one directed cycle (as names, closed) in parent->child direction."""
    n = len(parents)
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    stack: list[int] = []

    def visit(v: int) -> list[int] | None:
        color[v] = 1
        stack.append(v)
        for p in parents[v]:
            if color[p] == 1:
                cut = stack[stack.index(p):]
                return cut + [p]
            if color[p] == 0:
                found = visit(p)
                if found is not None:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for start in range(n):
        if color[start] == 0:
            found = visit(start)
            if found is not None:
                # visit() walks child -> parent, so reverse to arc direction.
                return [names[v] for v in reversed(found)]
    return []


def validate_dag(parents: Sequence[Sequence[int]], names: Sequence[str]) -> None:
    """Check parent sets for range, self-loops, duplicates, and acyclicity.

    Raises IndexOutOfRange, SelfLoop, DuplicateParent, or CycleDetected.
    """
    n = len(parents)
    if len(names) != n:
        raise ModelError(f"{len(names)} names for {n} parent sets")
    for v, ps in enumerate(parents):
        seen: set[int] = set()
        for p in ps:
            if not 0 <= p < n:
                raise IndexOutOfRange(
                    f"variable {names[v]!r}: parent index {p} out of range 0..{n - 1}"
                )
            if p == v:
                raise SelfLoop(f"variable {names[v]!r} lists itself as a parent")
            if p in seen:
                raise DuplicateParent(
                    f"variable {names[v]!r} lists parent {names[p]!r} twice"
                )
            seen.add(p)

    # Kahn's algorithm; any leftover node lies on a cycle.
    indeg = [len(ps) for ps in parents]
    children: list[list[int]] = [[] for _ in range(n)]
    for v, ps in enumerate(parents):
        for p in ps:
            children[p].append(v)
    ready = deque(v for v in range(n) if indeg[v] == 0)
    done = 0
    while ready:
        v = ready.popleft()
        done += 1
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if done != n:
        cycle = _find_cycle(parents, names)
        raise CycleDetected("cycle detected: " + " -> ".join(cycle))


@dataclass(frozen=True)
class DagStructure:
    """A directed acyclic graph over a fixed tuple of variables.

    ``parents[i]`` lists the parent indices of variable ``i`` in declaration
    order, which fixes the mixed-radix parent-configuration indexing.
    """

    variables: tuple[Variable, ...]
    parents: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        parents = tuple(tuple(int(p) for p in ps) for ps in self.parents)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "parents", parents)
        if not variables:
            raise ModelError("structure needs at least one variable")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ModelError("variable names must be unique")
        if len(parents) != len(variables):
            raise ModelError(
                f"{len(parents)} parent sets for {len(variables)} variables"
            )
        validate_dag(parents, names)

    @property
    def n(self) -> int:
        return len(self.variables)

    def arity(self, i: int) -> int:
        return self.variables[self._check_index(i)].arity

    def parent_config_count(self, i: int) -> int:
        """Number of parent configurations q_i (1 for a root)."""
        q = 1
        for p in self.parents[self._check_index(i)]:
            q *= self.variables[p].arity
        return q

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise IndexOutOfRange(f"no variable named {name!r}")

    def children(self, i: int) -> tuple[int, ...]:
        i = self._check_index(i)
        return tuple(c for c, ps in enumerate(self.parents) if i in ps)

    def topological_order(self) -> tuple[int, ...]:
        """Variable indices, parents before children; ties by index."""
        indeg = [len(ps) for ps in self.parents]
        out: list[int] = []
        ready = [v for v in range(self.n) if indeg[v] == 0]
        while ready:
            ready.sort()
            v = ready.pop(0)
            out.append(v)
            for c in range(self.n):
                if v in self.parents[c]:
                    indeg[c] -= 1
                    if indeg[c] == 0:
                        ready.append(c)
        return tuple(out)

    def arcs(self) -> tuple[tuple[int, int], ...]:
        """All (parent, child) arcs, children in index order."""
        return tuple(
            (p, c) for c in range(self.n) for p in self.parents[c]
        )

    def _check_index(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"variable index {i} out of range 0..{self.n - 1}")
        return i


def _as_case_array(variables: tuple[Variable, ...], cases) -> np.ndarray:
    arr = np.asarray(cases, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, len(variables))
    if arr.ndim != 2 or arr.shape[1] != len(variables):
        raise SchemaMismatch(
            f"case array must have {len(variables)} columns, got shape {arr.shape}"
        )
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Complete discrete data: one row per case, one column per variable."""

    variables: tuple[Variable, ...]
    cases: np.ndarray

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        arr = _as_case_array(variables, self.cases).copy()
        for col, v in enumerate(variables):
            column = arr[:, col]
            if column.size and (column.min() < 0 or column.max() >= v.arity):
                bad = column[(column < 0) | (column >= v.arity)][0]
                raise StateOutOfRange(
                    f"variable {v.name!r}: state {int(bad)} outside 0..{v.arity - 1}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "cases", arr)

    @property
    def n_cases(self) -> int:
        return self.cases.shape[0]

    def __len__(self) -> int:
        return self.n_cases

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.variables == other.variables and np.array_equal(
            self.cases, other.cases
        )

    def project(self, columns: Sequence[int]) -> "Dataset":
        """Dataset restricted to the given variable indices, in the given order."""
        cols = [self._check_column(c) for c in columns]
        return Dataset(
            tuple(self.variables[c] for c in cols), self.cases[:, cols]
        )

    def _check_column(self, c: int) -> int:
        if not 0 <= c < len(self.variables):
            raise IndexOutOfRange(
                f"variable index {c} out of range 0..{len(self.variables) - 1}"
            )
        return c


@dataclass(frozen=True, eq=False)
class SufficientStats:
    """Per-variable count tables of shape (parent configs, arity)."""

    tables: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        tables = tuple(self.tables)
        object.__setattr__(self, "tables", tables)
        totals = {int(t.sum()) for t in tables}
        if len(totals) > 1:
            raise ModelError(f"count tables disagree on the case total: {sorted(totals)}")
        for t in tables:
            if t.ndim != 2:
                raise ModelError("each count table must be two-dimensional")
            if t.size and t.min() < 0:
                raise ModelError("counts must be non-negative")

    @property
    def n_cases(self) -> int:
        return int(self.tables[0].sum()) if self.tables else 0

    def counts(self, i: int) -> np.ndarray:
        return self.tables[i]

    def config_totals(self, i: int) -> np.ndarray:
        """Row sums N_ij of variable i's table."""
        return self.tables[i].sum(axis=1)


def _mixed_radix(columns: np.ndarray, arities: Sequence[int]) -> np.ndarray:
    """Fold state columns into flat indices; first column most significant."""
    idx = np.zeros(columns.shape[0], dtype=np.int64)
    for k, r in enumerate(arities):
        idx = idx * r + columns[:, k]
    return idx


def parent_config_index(structure: DagStructure, var: int, parent_states: Sequence[int]) -> int:
    """Mixed-radix index of a parent configuration of ``var``.

    ``parent_states`` follows the declared parent order; the first parent is
    the most significant digit.  Roots map the empty configuration to 0.
    """
    var = structure._check_index(var)
    ps = structure.parents[var]
    states = list(parent_states)
    if len(states) != len(ps):
        raise ModelError(
            f"variable {structure.variables[var].name!r} has {len(ps)} parents, "
            f"got {len(states)} states"
        )
    idx = 0
    for p, s in zip(ps, states):
        r = structure.variables[p].arity
        if not 0 <= s < r:
            raise StateOutOfRange(
                f"state {s} out of range 0..{r - 1} for parent "
                f"{structure.variables[p].name!r}"
            )
        idx = idx * r + s
    return idx


def count_sufficient_stats(structure: DagStructure, data: Dataset) -> SufficientStats:
    """Count N_ijk for every (variable, parent config, state) in one pass."""
    if data.variables != structure.variables:
        raise SchemaMismatch(
            "dataset schema does not match structure variables: "
            f"{[v.name for v in data.variables]} vs "
            f"{[v.name for v in structure.variables]}"
        )
    tables = []
    for i, v in enumerate(structure.variables):
        ps = structure.parents[i]
        q = structure.parent_config_count(i)
        if ps:
            j = _mixed_radix(data.cases[:, ps], [structure.variables[p].arity for p in ps])
        else:
            j = np.zeros(data.n_cases, dtype=np.int64)
        flat = j * v.arity + data.cases[:, i]
        table = np.bincount(flat, minlength=q * v.arity).reshape(q, v.arity)
        table.setflags(write=False)
        tables.append(table)
    return SufficientStats(tuple(tables))


def joint_cell_counts(component: Sequence[int], data: Dataset) -> np.ndarray:
    """Joint counts over a variable subset, flattened in mixed-radix order.

    The first listed variable is the most significant digit; the result has
    one entry per joint cell and sums to the number of cases.
    """
    cols = list(component)
    if not cols:
        raise SchemaMismatch("component must name at least one variable")
    for c in cols:
        if not 0 <= c < len(data.variables):
            raise SchemaMismatch(
                f"component index {c} out of range 0..{len(data.variables) - 1}"
            )
    if len(set(cols)) != len(cols):
        raise SchemaMismatch("component lists a variable twice")
    arities = [data.variables[c].arity for c in cols]
    cells = 1
    for r in arities:
        cells *= r
    flat = _mixed_radix(data.cases[:, cols], arities)
    out = np.bincount(flat, minlength=cells)
    out.setflags(write=False)
    return out


def d_separated(structure: DagStructure, x: int, y: int, given: Iterable[int] = ()) -> bool:
    """True when every path between x and y is blocked by the given set.

    Uses the standard reachability procedure: descend through chains and
    forks not in the conditioning set, and pass through colliders whose
    descendants (including themselves) intersect it.
    """
    x = structure._check_index(x)
    y = structure._check_index(y)
    z = frozenset(structure._check_index(g) for g in given)
    if x == y:
        raise ModelError("x and y must be distinct")
    if x in z or y in z:
        raise ModelError("x and y must not appear in the conditioning set")

    # Ancestors of the conditioning set, including the set itself.
    anc = set(z)
    frontier = list(z)
    while frontier:
        v = frontier.pop()
        for p in structure.parents[v]:
            if p not in anc:
                anc.add(p)
                frontier.append(p)

    up, down = 0, 1  # arrived from a child / from a parent
    queue: deque[tuple[int, int]] = deque([(x, up)])
    visited: set[tuple[int, int]] = set()
    while queue:
        v, direction = queue.popleft()
        if (v, direction) in visited:
            continue
        visited.add((v, direction))
        if v not in z and v == y:
            return False
        if direction == up and v not in z:
            for p in structure.parents[v]:
                queue.append((p, up))
            for c in structure.children(v):
                queue.append((c, down))
        elif direction == down:
            if v not in z:
                for c in structure.children(v):
                    queue.append((c, down))
            if v in anc:
                for p in structure.parents[v]:
                    queue.append((p, up))
    return True


@dataclass(frozen=True)
class CliqueDecomposition:
    """Connected components of the skeleton, with a clique-union verdict.

    Components are sorted by smallest member index, members ascending.
    ``is_clique_union`` holds when every component is fully connected in the
    skeleton (every pair of member variables adjacent).
    """

    components: tuple[tuple[int, ...], ...]
    is_clique_union: bool


def _skeleton_neighbours(structure: DagStructure) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(structure.n)]
    for c in range(structure.n):
        for p in structure.parents[c]:
            nbrs[p].add(c)
            nbrs[c].add(p)
    return nbrs


def clique_decomposition(structure: DagStructure) -> CliqueDecomposition:
    """Split the skeleton into connected components and test for clique union."""
    nbrs = _skeleton_neighbours(structure)
    seen: set[int] = set()
    components: list[tuple[int, ...]] = []
    for start in range(structure.n):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in nbrs[v]:
                if w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        components.append(tuple(sorted(comp)))
    is_union = all(
        all(b in nbrs[a] for a in comp for b in comp if b > a) for comp in components
    )
    return CliqueDecomposition(tuple(components), is_union)


def first_non_adjacent_pair(structure: DagStructure) -> tuple[int, int] | None:
    """Lowest-indexed same-component variable pair missing a skeleton edge."""
    nbrs = _skeleton_neighbours(structure)
    decomp = clique_decomposition(structure)
    for comp in decomp.components:
        for a in comp:
            for b in comp:
                if b > a and b not in nbrs[a]:
                    return (a, b)
    return None


def _check_cpt(v: Variable, q: int, cpt: np.ndarray) -> np.ndarray:
    arr = np.asarray(cpt, dtype=float)
    if arr.shape != (q, v.arity):
        raise ModelError(
            f"variable {v.name!r}: CPT shape {arr.shape} != ({q}, {v.arity})"
        )
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ModelError(f"variable {v.name!r}: CPT entries must lie in [0, 1]")
    sums = arr.sum(axis=1)
    bad = np.where(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
    if bad.size:
        j = int(bad[0])
        raise ModelError(
            f"variable {v.name!r}: CPT row {j} sums to {sums[j]!r}, not 1"
        )
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BayesNet:
    """A DAG plus one conditional probability table per variable.

    ``cpts[i]`` has shape (parent configs, arity); each row sums to one
    within ROW_SUM_TOL.
    """

    structure: DagStructure
    cpts: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        cpts = tuple(self.cpts)
        if len(cpts) != self.structure.n:
            raise ModelError(
                f"{len(cpts)} CPTs for {self.structure.n} variables"
            )
        checked = tuple(
            _check_cpt(v, self.structure.parent_config_count(i), cpt)
            for i, (v, cpt) in enumerate(zip(self.structure.variables, cpts))
        )
        object.__setattr__(self, "cpts", checked)

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self.structure.variables

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BayesNet):
            return NotImplemented
        return self.structure == other.structure and all(
            np.array_equal(a, b) for a, b in zip(self.cpts, other.cpts)
        )
