"""Independent reference implementations the test suite checks the
package against. Nothing here imports the code paths under test beyond
plain data types; each oracle re-derives its answer from the format or
semantics definition."""

from __future__ import annotations

import itertools
from typing import Optional

from mythforge.query import Query, Var
from mythforge.rdf import Dataset, Iri, Literal


# ------------------------------------------------- serialized-array noise

class PhpDecodeError(Exception):
    pass


def decode_serialized_cell(text: str) -> Optional[list[str]]:
    """Reference decoder for a:N:{i:K;s:LEN:"payload";...} cells.

    Returns the payload list, or None when the input is not a serialized
    array at all. LEN counts UTF-8 bytes; when it does not land exactly
    on a closing '";' the payload is taken up to the nearest '";'.
    Structural violations raise PhpDecodeError.
    """
    s = text.strip()
    if not s.startswith("a:"):
        return None
    i = 2
    digits = ""
    while i < len(s) and s[i].isdigit():
        digits += s[i]
        i += 1
    if not digits or not s.startswith(":{", i):
        raise PhpDecodeError("array header")
    n = int(digits)
    i += 2
    out: list[str] = []
    for _ in range(n):
        if not s.startswith("i:", i):
            raise PhpDecodeError("index marker")
        i += 2
        while i < len(s) and s[i].isdigit():
            i += 1
        if not s.startswith(";s:", i):
            raise PhpDecodeError("string marker")
        i += 3
        digits = ""
        while i < len(s) and s[i].isdigit():
            digits += s[i]
            i += 1
        if not digits or not s.startswith(':"', i):
            raise PhpDecodeError("length")
        want = int(digits)
        i += 2
        start = i
        taken = 0
        while taken < want and i < len(s):
            taken += len(s[i].encode("utf-8"))
            i += 1
        if taken != want or not s.startswith('";', i):
            close = s.find('";', start)
            if close < 0:
                raise PhpDecodeError("payload")
            i = close
        out.append(s[start:i])
        i += 2
    if not s.startswith("}", i) or s[i + 1:].strip():
        raise PhpDecodeError("closing brace")
    return out


# ------------------------------------------------------- roman numerals

_ROMAN_TABLE = [
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"),
    (100, "C"), (90, "XC"), (50, "L"), (40, "XL"),
    (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
]

_ROMAN_VALUES = {"I": 1, "V": 5, "X": 10, "L": 50, "C": 100, "D": 500, "M": 1000}


def roman_render(n: int) -> str:
    """Greedy table rendering, the unique canonical form."""
    out = []
    for value, sym in _ROMAN_TABLE:
        while n >= value:
            out.append(sym)
            n -= value
    return "".join(out)


def roman_value(s: str) -> Optional[int]:
    """Subtractive-scan value; None for non-roman characters."""
    total = 0
    prev = 0
    for ch in reversed(s):
        v = _ROMAN_VALUES.get(ch)
        if v is None:
            return None
        total += v if v >= prev else -v
        prev = max(prev, v)
    return total


def roman_is_canonical(s: str) -> bool:
    v = roman_value(s)
    return v is not None and v > 0 and roman_render(v) == s


# -------------------------------------------------- query brute force

def _term_sort_key(term):
    if isinstance(term, Iri):
        return (0, term.value)
    return (1, term.lexical, term.datatype.value, getattr(term, "language", "") or "")


def _resolve(x, env):
    return env[x.name] if isinstance(x, Var) else x


def brute_force_evaluate(query: Query, dataset: Dataset):
    """Exhaustive-assignment evaluation: every query variable ranges
    over every term of the dataset (graph names included); an assignment
    is a solution when all patterns hold in their block's graph.

    Returns (columns, rows) with the same projection, DISTINCT and
    ordering rules the evaluator promises.
    """
    quads = {(q.subject, q.predicate, q.object, q.graph) for q in dataset}
    pool = set()
    for s, p, o, g in quads:
        pool.update((s, p, o, g))
    pool = sorted(pool, key=_term_sort_key)

    var_names: list[str] = []
    for block in query.blocks:
        if isinstance(block.graph_term, Var) and block.graph_term.name not in var_names:
            var_names.append(block.graph_term.name)
        for pat in block.patterns:
            for x in (pat.subject, pat.predicate, pat.object):
                if isinstance(x, Var) and x.name not in var_names:
                    var_names.append(x.name)

    solutions = set()
    for combo in itertools.product(pool, repeat=len(var_names)):
        env = dict(zip(var_names, combo))
        ok = True
        for block in query.blocks:
            g = _resolve(block.graph_term, env)
            if not isinstance(g, Iri):
                ok = False
                break
            for pat in block.patterns:
                s = _resolve(pat.subject, env)
                p = _resolve(pat.predicate, env)
                o = _resolve(pat.object, env)
                if (s, p, o, g) not in quads:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            solutions.add(tuple(env[v] for v in var_names))

    columns = tuple(v.name for v in query.select_vars)
    index = {name: i for i, name in enumerate(var_names)}
    rows = [tuple(sol[index[c]] for c in columns) for sol in solutions]
    if query.distinct:
        seen = set()
        unique = []
        for row in rows:
            key = tuple(_term_sort_key(t) for t in row)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique
    rows.sort(key=lambda row: [_term_sort_key(t) for t in row])
    return columns, rows


# ------------------------------------------------------ bucket overlap

def buckets_overlapped(start: int, end: int, width: int) -> int:
    """How many width-sized buckets aligned to line 1 the closed range
    [start, end] intersects."""
    return (end - 1) // width - (start - 1) // width + 1


__all__ = [
    "PhpDecodeError",
    "decode_serialized_cell",
    "roman_render",
    "roman_value",
    "roman_is_canonical",
    "brute_force_evaluate",
    "buckets_overlapped",
]
