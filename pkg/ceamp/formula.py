"""3-CNF formulas: DIMACS I/O, normalization, brute-force SAT and the occurrence order."""

import dataclasses
import logging
from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from ceamp import config as config_lib
from ceamp.custom_types import ClauseIndex, LiteralPosition, VariableIndex
from ceamp.errors import (
    FormulaError,
    FormulaParseError,
    GuardLimitError,
    NormalizationError,
)


@dataclasses.dataclass(frozen=True, order=True)
class Literal:
    """A possibly negated variable x_i.

    Attributes:
      variable: 0-based variable index.
      positive: False for the negated literal.
    """
    variable: VariableIndex
    positive: bool = True

    def __str__(self) -> str:
        return f"x{self.variable}" if self.positive else f"~x{self.variable}"

    def __neg__(self) -> "Literal":
        return Literal(self.variable, not self.positive)

    def to_dimacs(self) -> int:
        return self.variable + 1 if self.positive else -(self.variable + 1)

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise FormulaError("0 is not a DIMACS literal")
        return cls(abs(value) - 1, value > 0)

    def evaluate(self, values: Sequence[bool]) -> bool:
        return values[self.variable] == self.positive


@dataclasses.dataclass(frozen=True)
class Clause:
    """A disjunction of literals, kept in input order."""
    literals: tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))

    def __str__(self) -> str:
        return "(" + " | ".join(str(lit) for lit in self.literals) + ")"

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def variables(self) -> tuple[VariableIndex, ...]:
        return tuple(lit.variable for lit in self.literals)

    def position_of(self, variable: VariableIndex) -> LiteralPosition:
        """Returns the position of the first literal over `variable`."""
        for position, lit in enumerate(self.literals):
            if lit.variable == variable:
                return position
        raise FormulaError(f"x{variable} does not occur in {self}")

    def evaluate(self, values: Sequence[bool]) -> bool:
        return any(lit.evaluate(values) for lit in self.literals)


@dataclasses.dataclass(frozen=True)
class Assignment:
    """A total truth assignment, `values[i]` being the value of x_i."""
    values: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    def __getitem__(self, variable: VariableIndex) -> bool:
        return self.values[variable]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_mapping(cls, values: Mapping[VariableIndex, bool], n: int) -> "Assignment":
        missing = [i for i in range(n) if i not in values]
        if missing:
            raise FormulaError(f"assignment misses variables {missing}")
        return cls(tuple(values[i] for i in range(n)))

    def to_text(self) -> str:
        return "".join(
            f"x{i} {'true' if value else 'false'}\n" for i, value in enumerate(self.values)
        )

    @classmethod
    def parse(cls, text: str | bytes) -> "Assignment":
        """Parses lines of the form `x<i> true|false`; blank lines and `c` comments are skipped."""
        if isinstance(text, bytes):
            text = text.decode()
        values: dict[int, bool] = {}
        for line_number, line in enumerate(text.splitlines(), start=1):
            fields = line.split()
            if not fields or fields[0] == "c":
                continue
            if len(fields) != 2 or not fields[0].startswith("x") or fields[1] not in ("true", "false"):
                raise FormulaParseError(line_number, f"bad assignment line '{line.strip()}'")
            try:
                variable = int(fields[0][1:])
            except ValueError:
                raise FormulaParseError(line_number, f"bad variable name '{fields[0]}'")
            if variable in values:
                raise FormulaParseError(line_number, f"x{variable} assigned twice")
            values[variable] = fields[1] == "true"
        return cls.from_mapping(values, len(values))


@dataclasses.dataclass(frozen=True)
class Formula:
    """A CNF formula over x_0..x_{n-1}.

    Attributes:
      variable_count: Number of variables n.
      clauses: The clauses Gamma_0..Gamma_{m-1} in order.
    """
    variable_count: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        for clause in self.clauses:
            for lit in clause:
                if not 0 <= lit.variable < self.variable_count:
                    raise FormulaError(
                        f"{lit} is out of range for {self.variable_count} variables"
                    )

    def __str__(self) -> str:
        return " & ".join(str(clause) for clause in self.clauses) or "(empty)"

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def occurrences(self, variable: VariableIndex) -> tuple[ClauseIndex, ...]:
        """Returns the indices of the clauses containing `variable`, ascending."""
        return self._occurrence_table()[variable]

    def occurrence_count(self, variable: VariableIndex) -> int:
        """m_i: the number of clauses containing `variable`."""
        return len(self.occurrences(variable))

    def _occurrence_table(self) -> tuple[tuple[ClauseIndex, ...], ...]:
        table = self.__dict__.get("_occurrences")
        if table is None:
            rows: list[list[ClauseIndex]] = [[] for _ in range(self.variable_count)]
            for d, clause in enumerate(self.clauses):
                for variable in sorted(set(clause.variables)):
                    rows[variable].append(d)
            table = tuple(tuple(row) for row in rows)
            object.__setattr__(self, "_occurrences", table)
        return table

    def occurrence_index(self, variable: VariableIndex, d: ClauseIndex) -> int:
        """pi(i, d): rank of clause `d` among the clauses containing x_i."""
        occurrences = self.occurrences(variable)
        try:
            return occurrences.index(d)
        except ValueError:
            raise FormulaError(f"x{variable} does not occur in clause {d}")

    def is_normalized(self) -> bool:
        """Whether every clause has 3 distinct variables and every variable occurs at least twice."""
        if any(len(set(clause.variables)) != 3 or len(clause) != 3 for clause in self.clauses):
            return False
        return all(self.occurrence_count(i) >= 2 for i in range(self.variable_count))

    def is_satisfied_by(self, assignment: Assignment) -> bool:
        if len(assignment) < self.variable_count:
            raise FormulaError(
                f"assignment covers {len(assignment)} of {self.variable_count} variables"
            )
        return all(clause.evaluate(assignment.values) for clause in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {self.clause_count}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit.to_dimacs()) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs_lists(cls, n: int, clauses: Iterable[Iterable[int]]) -> "Formula":
        return cls(n, tuple(Clause(tuple(Literal.from_dimacs(v) for v in c)) for c in clauses))


@dataclasses.dataclass(frozen=True)
class Normalization:
    """A normalized formula and the fate of each input variable.

    Attributes:
      formula: The normalized formula.
      variable_map: `variable_map[i]` is the index of input variable x_i in
        `formula`, or None when x_i occurs in no clause of it.
    """
    formula: Formula
    variable_map: tuple[VariableIndex | None, ...]

    def restore(self, a: Assignment) -> Assignment:
        """Maps an assignment of `formula` back to the input variables.

        Dropped variables come back false. The result satisfies the input
        formula whenever `a` satisfies `formula`.
        """
        if len(a) < self.formula.variable_count:
            raise FormulaError(
                f"assignment covers {len(a)} of {self.formula.variable_count} variables"
            )
        return Assignment(tuple(j is not None and a[j] for j in self.variable_map))


def occurrence_index(f: Formula, variable: VariableIndex, d: ClauseIndex) -> int:
    """Returns pi(i, d), the rank of clause `d` among the clauses containing x_i."""
    return f.occurrence_index(variable, d)


def parse_dimacs(text: str | bytes) -> Formula:
    """Parses a DIMACS CNF document.

    Clauses may span several lines; each is terminated by a 0. Comment lines
    start with `c`, and a `%` line ends the input.

    Raises:
      FormulaParseError: On a malformed header, a non-integer token, a literal
        out of range, a missing terminator or a clause count mismatch.
    """
    if isinstance(text, bytes):
        text = text.decode()
    n: int | None = None
    expected = 0
    clauses: list[list[int]] = []
    pending: list[int] = []
    line_number = 0
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            fields = line.split()
            if n is not None:
                raise FormulaParseError(line_number, "duplicate header line")
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise FormulaParseError(line_number, f"bad header line '{line}'")
            try:
                n, expected = int(fields[2]), int(fields[3])
            except ValueError:
                raise FormulaParseError(line_number, f"bad header line '{line}'")
            if n < 0 or expected < 0:
                raise FormulaParseError(line_number, "negative counts in header")
            continue
        if n is None:
            raise FormulaParseError(line_number, "clause before header line")
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise FormulaParseError(line_number, f"non-integer field '{token}'")
            if value == 0:
                clauses.append(pending)
                pending = []
            elif abs(value) > n:
                raise FormulaParseError(line_number, f"literal {value} out of range")
            else:
                pending.append(value)
    if n is None:
        raise FormulaParseError(line_number, "missing header line")
    if pending:
        raise FormulaParseError(line_number, "clause not terminated by 0")
    if len(clauses) != expected:
        raise FormulaParseError(
            line_number, f"got {len(clauses)} clauses, expected {expected}"
        )
    return Formula.from_dimacs_lists(n, clauses)


def _dedup(clause: Clause) -> list[Literal]:
    seen: list[Literal] = []
    for lit in clause:
        if lit not in seen:
            seen.append(lit)
    return seen


def normalize(f: Formula) -> Formula:
    """Brings `f` into the input form of the reduction.

    See `normalize_with_map`, which also tells where each variable went.
    """
    return normalize_with_map(f).formula


def normalize_with_map(f: Formula) -> Normalization:
    """Normalizes `f` and records the variable renumbering.

    The steps run in order: repeated literals are dropped, tautological
    clauses are removed, clauses over fewer than 3 variables are widened with
    fresh variables (n, n+1, ... in clause order), and for every variable that
    occurs exactly once the first clause containing it is duplicated. Last,
    variables occurring in no clause are dropped and the rest renumbered
    0, 1, ... in index order, so every variable of the result occurs at least
    twice. The result is equisatisfiable with `f`.

    Raises:
      NormalizationError: On an empty clause or a clause over more than 3
        distinct variables.
    """
    n = f.variable_count
    widened: list[tuple[Literal, ...]] = []
    for d, clause in enumerate(f.clauses):
        literals = _dedup(clause)
        if not literals:
            raise NormalizationError(f"unsatisfiable clause {d}: empty")
        if any(-lit in literals for lit in literals):
            logging.debug(f"Dropping tautological clause {d} {clause}")
            continue
        if len(literals) > 3:
            raise NormalizationError(
                f"clause {d} has {len(literals)} distinct variables, at most 3 are supported"
            )
        if len(literals) == 3:
            widened.append(tuple(literals))
        elif len(literals) == 2:
            y = Literal(n)
            n += 1
            widened.extend([(*literals, y), (*literals, -y)])
        else:
            y, z = Literal(n), Literal(n + 1)
            n += 2
            for a in (y, -y):
                for b in (z, -z):
                    widened.append((literals[0], a, b))

    counts = [0] * n
    for literals in widened:
        for lit in literals:
            counts[lit.variable] += 1
    for variable in range(n):
        if counts[variable] != 1:
            continue
        source = next(c for c in widened if any(lit.variable == variable for lit in c))
        logging.debug(f"Duplicating {source} for once-occurring x{variable}")
        widened.append(source)
        for lit in source:
            counts[lit.variable] += 1

    index = {v: k for k, v in enumerate(v for v in range(n) if counts[v])}
    if len(index) < n:
        logging.debug(f"Dropping unused variables {[v for v in range(n) if not counts[v]]}")
    result = Formula(
        len(index),
        tuple(Clause(tuple(Literal(index[lit.variable], lit.positive) for lit in c)) for c in widened),
    )
    variable_map = tuple(index.get(i) for i in range(f.variable_count))
    if result == f:
        return Normalization(f, variable_map)
    logging.info(
        f"Normalized formula: {f.variable_count} -> {result.variable_count} variables, "
        f"{f.clause_count} -> {result.clause_count} clauses"
    )
    return Normalization(result, variable_map)


def brute_force_sat(
    f: Formula, conf: config_lib.FormulaConfig | None = None
) -> Assignment | None:
    """Returns the lexicographically first satisfying assignment of `f`, if any.

    Candidates are enumerated with x_0 as the most significant bit and false
    before true, in vectorised batches of `conf.sat_chunk_size`.

    Raises:
      GuardLimitError: If `f` has more than `conf.sat_variable_limit` variables.
    """
    conf = conf or config_lib.FormulaConfig()
    n = f.variable_count
    if n > conf.sat_variable_limit:
        raise GuardLimitError(
            f"brute-force SAT refuses {n} variables (limit {conf.sat_variable_limit})"
        )
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, conf.sat_chunk_size):
        candidates = np.arange(start, min(total, start + conf.sat_chunk_size), dtype=np.int64)
        bits = ((candidates[:, None] >> shifts) & 1).astype(bool)
        satisfied = np.ones(len(candidates), dtype=bool)
        for clause in f.clauses:
            clause_true = np.zeros(len(candidates), dtype=bool)
            for lit in clause:
                column = bits[:, lit.variable]
                clause_true |= column if lit.positive else ~column
            satisfied &= clause_true
        hits = np.flatnonzero(satisfied)
        if hits.size:
            return Assignment(tuple(bits[hits[0]].tolist()))
    return None
