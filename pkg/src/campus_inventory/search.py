"""Boolean search over named table/column units.

Query text is whitespace-tokenized.  ``NOT`` pulls the following term out
into an exclusion list; the remaining terms form the include expression,
where ``AND`` binds tighter than ``OR``, both associate left, and bare
adjacency means ``AND``.  Operators are recognized in upper case only, so
lower-case words stay searchable.  Matching is case-insensitive substring
containment; include terms are compiled to parameterized SQL, exclusions
are applied as a post-filter over every returned column.

A driver may hold the same unit twice; duplicates are searched twice and
contribute twice to the combined table.
"""

from __future__ import annotations

import csv
import io
import sqlite3
from dataclasses import dataclass, field

from .domain import as_text
from .errors import DanglingOperator, EmptyPool, EmptyQuery, NoSearchRun, SearchFault
from .storage import SEARCH_ACTIVE_GUARD, Store

OPERATORS = ("AND", "OR", "NOT")


@dataclass(frozen=True)
class Term:
    value: str


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Query:
    """Parsed query: an include expression plus ordered exclusions."""

    includes: object
    excludes: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchUnit:
    """One searchable (table, columns) pair."""

    table_name: str
    column_names: tuple[str, ...]


@dataclass
class ResultSet:
    """Rows found in one unit, as text tuples."""

    object_name: str
    columns: tuple[str, ...]
    rows: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.rows)


def parse_query(text: str) -> Query:
    """Build the include tree and exclusion list for a query string."""
    tokens = text.split()
    if not tokens:
        raise EmptyQuery("query text is empty")

    includes: list[str] = []
    excludes: list[str] = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token == "NOT":
            if i + 1 >= len(tokens) or tokens[i + 1] in OPERATORS:
                raise DanglingOperator("NOT needs a term to exclude")
            excludes.append(tokens[i + 1])
            i += 2
        else:
            includes.append(token)
            i += 1

    if not includes:
        raise EmptyQuery("query has no include terms")
    return Query(includes=_parse_or(includes), excludes=tuple(excludes))


def _parse_or(tokens: list[str]):
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take_term():
        nonlocal pos
        token = peek()
        if token is None or token in OPERATORS:
            raise DanglingOperator(f"operator {token or 'at end'} lacks an operand")
        pos += 1
        return Term(token)

    def parse_and():
        nonlocal pos
        node = take_term()
        while True:
            token = peek()
            if token == "AND":
                pos += 1
                node = And(node, take_term())
            elif token is not None and token not in OPERATORS:
                node = And(node, take_term())  # implicit AND for adjacency
            else:
                return node

    def parse_or_level():
        nonlocal pos
        node = parse_and()
        while peek() == "OR":
            pos += 1
            node = Or(node, parse_and())
        return node

    tree = parse_or_level()
    if pos != len(tokens):
        raise DanglingOperator(f"unexpected {tokens[pos]}")
    return tree


def _like_pattern(term: str) -> str:
    escaped = (term.lower()
               .replace("\\", "\\\\")
               .replace("%", "\\%")
               .replace("_", "\\_"))
    return f"%{escaped}%"


def _compile(node, columns: tuple[str, ...]) -> tuple[str, list[str]]:
    """Render the include tree as a condition with ? placeholders only."""
    if isinstance(node, Term):
        pattern = _like_pattern(node.value)
        clause = " OR ".join(
            f"lower(\"{col}\") LIKE ? ESCAPE '\\'" for col in columns)
        return f"({clause})", [pattern] * len(columns)
    if isinstance(node, And):
        left, lp = _compile(node.left, columns)
        right, rp = _compile(node.right, columns)
        return f"({left} AND {right})", lp + rp
    if isinstance(node, Or):
        left, lp = _compile(node.left, columns)
        right, rp = _compile(node.right, columns)
        return f"({left} OR {right})", lp + rp
    raise SearchFault(f"unknown query node {node!r}")


def describe_query(unit: SearchUnit, ast: Query) -> str:
    """Normal-form description; values stay behind placeholders."""
    condition, _ = _compile(ast.includes, tuple(unit.column_names))
    return f"The query is: SELECT * FROM {unit.table_name} WHERE {condition}"


def exclude(result: ResultSet, term: str) -> tuple[ResultSet, bool]:
    """Drop rows containing the term in any column; report if any fell."""
    needle = term.lower()
    kept = [row for row in result.rows
            if not any(needle in cell.lower() for cell in row)]
    changed = len(kept) < len(result.rows)
    return ResultSet(result.object_name, result.columns, kept), changed


def unit_search(store: Store, unit: SearchUnit, ast: Query) -> ResultSet:
    """Run one unit against the store and post-filter the exclusions."""
    catalog = store.schema_catalog()
    columns = catalog.get(unit.table_name)
    if columns is None:
        raise SearchFault(f"not a searchable table: {unit.table_name}")
    missing = [c for c in unit.column_names if c not in columns]
    if missing:
        raise SearchFault(f"unknown column(s): {', '.join(missing)}")

    condition, params = _compile(ast.includes, tuple(unit.column_names))
    guard = SEARCH_ACTIVE_GUARD.get(unit.table_name)
    where = f"({guard}) AND {condition}" if guard else condition
    projection = ", ".join(f'"{c}"' for c in columns)
    sql = (f'SELECT {projection} FROM "{unit.table_name}" '
           f"WHERE {where} ORDER BY rowid")
    try:
        raw = store.raw_select(sql, params)
    except sqlite3.Error as exc:
        raise SearchFault(str(exc)) from exc

    result = ResultSet(unit.table_name, tuple(columns),
                       [tuple(as_text(v) for v in row) for row in raw])
    for term in ast.excludes:
        result, _ = exclude(result, term)
    return result


class SearchDriver:
    """Pool of search units plus the results of the last run."""

    def __init__(self, store: Store):
        self._store = store
        self.units: list[SearchUnit] = []
        self.results: list[ResultSet] | None = None

    def add_search_unit(self, table_name: str, column_names) -> bool:
        """Add a unit if the table and columns exist; pool order is kept."""
        catalog = self._store.schema_catalog()
        columns = catalog.get(table_name)
        if columns is None:
            return False
        names = tuple(column_names)
        if not names or any(c not in columns for c in names):
            return False
        self.units.append(SearchUnit(table_name, names))
        return True

    def search(self, text: str) -> int:
        """Search every unit with the same parsed query; returns total hits."""
        if not self.units:
            raise EmptyPool("no search units in the pool")
        ast = parse_query(text)
        self.results = [unit_search(self._store, unit, ast) for unit in self.units]
        return sum(r.count for r in self.results)

    def combined_table(self) -> list[tuple[str, ...]]:
        """All result rows as one table, each row tagged with its source."""
        if self.results is None:
            raise NoSearchRun("run a search first")
        rows: list[tuple[str, ...]] = []
        for result in self.results:
            rows.extend((result.object_name,) + row for row in result.rows)
        return rows

    def results_as_csv(self) -> str:
        """One section per unit: table-name header line, then data rows."""
        if self.results is None:
            raise NoSearchRun("run a search first")
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        for result in self.results:
            writer.writerow([result.object_name])
            for row in result.rows:
                writer.writerow(row)
        return out.getvalue()


def basic_search(store: Store, text: str) -> SearchDriver:
    """Basic search: the standard pool of main tables, all text columns."""
    from .storage import TEXT_COLUMNS

    driver = SearchDriver(store)
    for table in ("person", "assets", "locations", "licenses"):
        driver.add_search_unit(table, TEXT_COLUMNS[table])
    driver.search(text)
    return driver
