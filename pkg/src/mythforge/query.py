"""A deliberately small SPARQL subset: PREFIX, SELECT [DISTINCT], WHERE
with GRAPH blocks, basic graph patterns with ';' and ',' shorthands and
the 'a' keyword. Nothing else parses: no FILTER, OPTIONAL, UNION, paths,
blank nodes, numeric literals or expressions.

Evaluation is plain natural join over the quad set, with the graph
position joining like any other. Rows come back projected, optionally
deduplicated, and sorted lexicographically by term string per column.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import PrefixError, QueryParseError
from .rdf import (
    Dataset,
    IRI_RDF_TYPE,
    Iri,
    Literal,
    PrefixMap,
    Term,
    term_key,
)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


TermOrVar = Union[Var, Iri, Literal]


@dataclass(frozen=True)
class TriplePattern:
    subject: TermOrVar
    predicate: Union[Var, Iri]
    object: TermOrVar


@dataclass(frozen=True)
class GraphBlock:
    graph_term: Union[Var, Iri]
    patterns: tuple[TriplePattern, ...]


@dataclass(frozen=True)
class Query:
    prefixes: PrefixMap
    select_vars: tuple[Var, ...]
    distinct: bool
    blocks: tuple[GraphBlock, ...]


@dataclass(frozen=True)
class BindingTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iriref><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<dtmark>\^\^)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<pname>[A-Za-z][A-Za-z0-9_\-]*:[A-Za-z0-9_](?:[A-Za-z0-9_./\-]*[A-Za-z0-9_/\-])?|[A-Za-z][A-Za-z0-9_\-]*:)
  | (?P<keyword>[A-Za-z][A-Za-z0-9_\-]*)
  | (?P<punct>[{}.;,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise QueryParseError(
                f"unexpected character {text[pos]!r} at offset {pos}",
                position=pos,
                expected=("token",),
            )
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append(_Token(kind, m.group(0), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# --------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.prefixes = PrefixMap()

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        tok = self.peek()
        raise QueryParseError(
            f"expected {' or '.join(expected)} at offset {tok.pos}, got {tok.value!r}",
            position=tok.pos,
            expected=expected,
        )

    def keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "keyword" and tok.value.upper() == word:
            self.next()
            return True
        return False

    def expect_keyword(self, word: str):
        if not self.keyword(word):
            self.fail((word,))

    def expect_punct(self, ch: str):
        tok = self.peek()
        if tok.kind == "punct" and tok.value == ch:
            self.next()
            return
        self.fail((ch,))

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == ch

    # grammar

    def parse(self) -> Query:
        while self.keyword("PREFIX"):
            tok = self.peek()
            if tok.kind != "pname" or not tok.value.endswith(":"):
                self.fail(("prefix label",))
            label = self.next().value[:-1]
            tok = self.peek()
            if tok.kind != "iriref":
                self.fail(("namespace IRI",))
            ns = Iri(self.next().value[1:-1])
            self.prefixes.bind(label, ns)

        self.expect_keyword("SELECT")
        distinct = self.keyword("DISTINCT")
        select_vars: list[Var] = []
        while self.peek().kind == "var":
            select_vars.append(Var(self.next().value[1:]))
        if not select_vars:
            self.fail(("?variable",))

        self.expect_keyword("WHERE")
        self.expect_punct("{")
        blocks: list[GraphBlock] = []
        top_level: list[TriplePattern] = []
        fresh_graph = Var("__g")
        while not self.at_punct("}"):
            if self.keyword("GRAPH"):
                graph_term = self._graph_term()
                self.expect_punct("{")
                patterns = self._triples_block()
                self.expect_punct("}")
                blocks.append(GraphBlock(graph_term, tuple(patterns)))
            else:
                top_level.extend(self._triples_block())
                if not self.at_punct("}") and not (
                    self.peek().kind == "keyword" and self.peek().value.upper() == "GRAPH"
                ):
                    self.fail(("GRAPH", "}"))
        self.expect_punct("}")
        if self.peek().kind != "eof":
            self.fail(("end of query",))

        if top_level:
            blocks.append(GraphBlock(fresh_graph, tuple(top_level)))
        if not blocks:
            raise QueryParseError("empty WHERE clause", position=len(self.text))

        query = Query(
            prefixes=self.prefixes,
            select_vars=tuple(select_vars),
            distinct=distinct,
            blocks=tuple(blocks),
        )
        pattern_vars = _pattern_vars(query)
        for v in select_vars:
            if v not in pattern_vars:
                raise QueryParseError(
                    f"selected variable ?{v.name} not used in any pattern",
                    position=0,
                    expected=("used variable",),
                )
        return query

    def _graph_term(self) -> Union[Var, Iri]:
        tok = self.peek()
        if tok.kind == "var":
            return Var(self.next().value[1:])
        if tok.kind in ("iriref", "pname"):
            return self._iri()
        self.fail(("?variable", "IRI"))

    def _iri(self) -> Iri:
        tok = self.next()
        if tok.kind == "iriref":
            return Iri(tok.value[1:-1])
        if tok.kind == "pname":
            # unknown prefixes surface as PrefixError, not a syntax error
            return self.prefixes.expand(tok.value)
        raise QueryParseError("expected IRI", position=tok.pos, expected=("IRI",))

    def _triples_block(self) -> list[TriplePattern]:
        patterns: list[TriplePattern] = []
        while True:
            if self.at_punct("}"):
                return patterns
            tok = self.peek()
            if tok.kind == "keyword" and tok.value.upper() == "GRAPH":
                return patterns
            patterns.extend(self._triple_same_subject())
            if self.at_punct("."):
                self.next()
                continue
            return patterns

    def _triple_same_subject(self) -> list[TriplePattern]:
        subject = self._term(allow_literal=False)
        patterns: list[TriplePattern] = []
        while True:
            predicate = self._predicate()
            while True:
                obj = self._term(allow_literal=True)
                patterns.append(TriplePattern(subject, predicate, obj))
                if self.at_punct(","):
                    self.next()
                    continue
                break
            if self.at_punct(";"):
                self.next()
                # allow a dangling ';' before '.' or '}'
                if self.at_punct("}") or self.at_punct("."):
                    break
                continue
            break
        return patterns

    def _predicate(self) -> Union[Var, Iri]:
        tok = self.peek()
        if tok.kind == "keyword" and tok.value == "a":
            self.next()
            return IRI_RDF_TYPE
        if tok.kind == "var":
            return Var(self.next().value[1:])
        if tok.kind in ("iriref", "pname"):
            return self._iri()
        self.fail(("a", "IRI", "?variable"))

    def _term(self, allow_literal: bool) -> TermOrVar:
        tok = self.peek()
        if tok.kind == "var":
            return Var(self.next().value[1:])
        if tok.kind in ("iriref", "pname"):
            return self._iri()
        if tok.kind == "string" and allow_literal:
            return self._literal()
        if allow_literal:
            self.fail(("IRI", "?variable", "string literal"))
        self.fail(("IRI", "?variable"))

    def _literal(self) -> Literal:
        tok = self.next()
        lexical = _decode_string(tok.value[1:-1], tok.pos)
        if self.peek().kind == "dtmark":
            self.next()
            datatype = self._iri()
            return Literal(lexical, datatype)
        return Literal(lexical)


def _decode_string(body: str, pos: int) -> str:
    try:
        from .serialize import _unescape

        return _unescape(body, 0)
    except Exception:
        raise QueryParseError(f"bad string escape at offset {pos}", position=pos)


def _pattern_vars(query: Query) -> set[Var]:
    found: set[Var] = set()
    for block in query.blocks:
        if isinstance(block.graph_term, Var):
            found.add(block.graph_term)
        for pattern in block.patterns:
            for part in (pattern.subject, pattern.predicate, pattern.object):
                if isinstance(part, Var):
                    found.add(part)
    return found


def parse_query(text: str) -> Query:
    """Parse the restricted subset; QueryParseError pinpoints rejects."""
    return _Parser(text).parse()


# ------------------------------------------------------------- evaluator


def _subst(part: TermOrVar, binding: dict) -> Optional[Term]:
    if isinstance(part, Var):
        return binding.get(part)
    return part


def evaluate(query: Query, dataset: Dataset) -> BindingTable:
    """Join all patterns over the dataset and project the selected vars."""
    solutions: list[dict] = [{}]
    for block in query.blocks:
        for pattern in block.patterns:
            next_solutions: list[dict] = []
            seen: set = set()
            for binding in solutions:
                want_s = _subst(pattern.subject, binding)
                want_p = _subst(pattern.predicate, binding)
                want_o = _subst(pattern.object, binding)
                want_g = _subst(block.graph_term, binding)
                for quad in dataset.match(want_s, want_p, want_o, want_g):
                    new = dict(binding)
                    ok = True
                    for part, value in (
                        (pattern.subject, quad.subject),
                        (pattern.predicate, quad.predicate),
                        (pattern.object, quad.object),
                        (block.graph_term, quad.graph),
                    ):
                        if isinstance(part, Var):
                            bound = new.get(part)
                            if bound is None:
                                new[part] = value
                            elif bound != value:
                                ok = False
                                break
                    if not ok:
                        continue
                    key = tuple(sorted(((v.name, term_key(t)) for v, t in new.items())))
                    if key not in seen:
                        seen.add(key)
                        next_solutions.append(new)
            solutions = next_solutions
            if not solutions:
                break
        if not solutions:
            break

    rows = [tuple(sol[v] for v in query.select_vars) for sol in solutions]
    if query.distinct:
        unique = {tuple(term_key(t) for t in row): row for row in rows}
        rows = list(unique.values())
    rows.sort(key=lambda row: tuple(term_key(t) for t in row))
    return BindingTable(
        columns=tuple(v.name for v in query.select_vars),
        rows=tuple(rows),
    )


# -------------------------------------------------------------- CQ suite


@dataclass(frozen=True)
class CqCase:
    name: str
    query_text: str
    expect_rows: Optional[tuple[tuple[str, ...], ...]] = None
    min_count: Optional[int] = None


@dataclass
class CqResult:
    name: str
    status: str  # PASS | FAIL | ERROR
    expected_count: Optional[int]
    actual_count: Optional[int]
    missing: list = field(default_factory=list)
    unexpected: list = field(default_factory=list)
    message: str = ""


def load_cq_suite(path) -> list[CqCase]:
    """Suite file: [{name, query | query_file, expect: {rows | min_count}}]"""
    import os

    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    base_dir = os.path.dirname(os.fspath(path))
    cases = []
    for row in data:
        if "query_file" in row:
            with open(os.path.join(base_dir, row["query_file"]), encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = row["query"]
        expect = row.get("expect", {})
        rows = expect.get("rows")
        cases.append(
            CqCase(
                name=row["name"],
                query_text=text,
                expect_rows=tuple(tuple(r) for r in rows) if rows is not None else None,
                min_count=expect.get("min_count"),
            )
        )
    return cases


def _expect_term(cell: str, prefixes: PrefixMap) -> Term:
    if cell.startswith("<") and cell.endswith(">"):
        return Iri(cell[1:-1])
    if cell.startswith('"'):
        body, _, dt = cell.partition("^^")
        lexical = body.strip('"')
        if dt:
            return Literal(lexical, prefixes.expand(dt))
        return Literal(lexical)
    return prefixes.expand(cell)


def run_cq_suite(
    cases: list[CqCase],
    dataset: Dataset,
    extra_prefixes: Optional[PrefixMap] = None,
) -> list[CqResult]:
    """Evaluate every case; parse failures are reported, not raised."""
    results = []
    for case in cases:
        try:
            query = parse_query(case.query_text)
        except (QueryParseError, PrefixError) as exc:
            results.append(
                CqResult(case.name, "ERROR", None, None, message=str(exc))
            )
            continue
        table = evaluate(query, dataset)
        actual = {row for row in table.rows}
        prefixes = query.prefixes
        if extra_prefixes is not None:
            prefixes = prefixes.merged(extra_prefixes)
        if case.expect_rows is not None:
            try:
                expected = {
                    tuple(_expect_term(cell, prefixes) for cell in row)
                    for row in case.expect_rows
                }
            except PrefixError as exc:
                results.append(CqResult(case.name, "ERROR", None, None, message=str(exc)))
                continue
            missing = sorted(expected - actual, key=lambda r: [term_key(t) for t in r])
            unexpected = sorted(actual - expected, key=lambda r: [term_key(t) for t in r])
            status = "PASS" if not missing and not unexpected else "FAIL"
            results.append(
                CqResult(
                    case.name,
                    status,
                    expected_count=len(expected),
                    actual_count=len(actual),
                    missing=[[str(t) for t in row] for row in missing],
                    unexpected=[[str(t) for t in row] for row in unexpected],
                )
            )
        elif case.min_count is not None:
            status = "PASS" if len(actual) >= case.min_count else "FAIL"
            results.append(
                CqResult(case.name, status, expected_count=case.min_count, actual_count=len(actual))
            )
        else:
            results.append(
                CqResult(case.name, "PASS", expected_count=None, actual_count=len(actual))
            )
    return results


def render_cq_report(results: list[CqResult]) -> str:
    lines = []
    for r in results:
        detail = ""
        if r.status == "FAIL":
            detail = f" (expected {r.expected_count}, got {r.actual_count}"
            if r.missing:
                detail += f"; missing {len(r.missing)}"
            if r.unexpected:
                detail += f"; unexpected {len(r.unexpected)}"
            detail += ")"
        elif r.status == "ERROR":
            detail = f" ({r.message})"
        lines.append(f"{r.status:5s} {r.name}{detail}")
    passed = sum(1 for r in results if r.status == "PASS")
    lines.append(f"{passed}/{len(results)} competency questions pass")
    return "\n".join(lines)


def cq_report_json(results: list[CqResult]) -> dict:
    return {
        "schema": 1,
        "total": len(results),
        "passed": sum(1 for r in results if r.status == "PASS"),
        "results": [
            {
                "name": r.name,
                "status": r.status,
                "expected_count": r.expected_count,
                "actual_count": r.actual_count,
                "missing": r.missing,
                "unexpected": r.unexpected,
                "message": r.message,
            }
            for r in results
        ],
    }
