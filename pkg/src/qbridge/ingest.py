"""JSON specifications and rule-based snippet classification into ProblemInstances."""

from __future__ import annotations

import ast
import io
import json
import math
import re
import tokenize
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from .errors import (
    ExtractionFailed,
    JsonSyntaxError,
    MalformedGraph,
    MissingDataField,
    TagDataMismatch,
    UnknownProblemType,
)
from .problem import (
    ARITH_TAGS,
    GRAPH_TAGS,
    K_TAGS,
    ArithmeticOperands,
    GraphData,
    ProblemInstance,
    ProblemTag,
    validate_instance,
)

T = ProblemTag

ALIASES: dict[str, ProblemTag] = {
    "maxcut": T.MAXCUT,
    "mis": T.MIS,
    "tsp": T.TSP,
    "clique": T.CLIQUE,
    "kcolor": T.KCOLOR,
    "vc": T.VERTEX_COVER,
    "vertexcover": T.VERTEX_COVER,
    "factor": T.FACTORIZATION,
    "factorization": T.FACTORIZATION,
    "add": T.ADD,
    "mul": T.MUL,
    "sub": T.SUB,
}


def tag_from_name(name: str) -> ProblemTag:
    key = re.sub(r"[\s_\-]", "", str(name)).lower()
    if key not in ALIASES:
        raise UnknownProblemType(f"unknown problem type {name!r}")
    return ALIASES[key]


# ------------------------------------------------------------------ JSON


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return (isinstance(x, (int, float)) and not isinstance(x, bool)) and math.isfinite(x)


def _require(data: dict, key: str, tag: ProblemTag):
    if key not in data:
        raise MissingDataField(f"{tag.display} requires data field {key!r}")
    return data[key]


def _int_field(data: dict, key: str, tag: ProblemTag) -> int:
    v = _require(data, key, tag)
    if not _is_int(v):
        raise TagDataMismatch(f"field {key!r} must be an integer, got {v!r}")
    return v


def _edges_from_list(raw) -> list[tuple]:
    if not isinstance(raw, list):
        raise MalformedGraph("edges must be a list")
    out = []
    for e in raw:
        if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
            raise MalformedGraph(f"edge {e!r} must be [u, v] or [u, v, w]")
        if not (_is_int(e[0]) and _is_int(e[1])):
            raise MalformedGraph(f"edge endpoints must be integers: {e!r}")
        if len(e) == 3 and not _is_num(e[2]):
            raise MalformedGraph(f"edge weight must be a finite number: {e!r}")
        out.append(tuple(e))
    return out


def _square(m, what: str) -> int:
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise MalformedGraph(f"{what} must be a list of rows")
    n = len(m)
    if any(len(r) != n for r in m):
        raise MalformedGraph(f"{what} must be square")
    if not all(_is_num(x) for r in m for x in r):
        raise MalformedGraph(f"{what} entries must be finite numbers")
    return n


def edges_from_matrix(m, what: str = "adjacency matrix") -> tuple[int, list[tuple]]:
    """Square, symmetric, zero-diagonal matrix to (node_count, edges); nonzero entries become weights."""
    n = _square(m, what)
    for i in range(n):
        if m[i][i] != 0:
            raise MalformedGraph(f"{what} has nonzero diagonal at {i}")
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise MalformedGraph(f"{what} is not symmetric at ({i},{j})")
    return n, [(i, j, float(m[i][j])) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0]


def edges_from_distances(m) -> tuple[int, list[tuple]]:
    # every off-diagonal pair is a road, zero length included
    n, _ = edges_from_matrix(m, "distance matrix")
    return n, [(i, j, float(m[i][j])) for i in range(n) for j in range(i + 1, n)]


def _graph_from_data(tag: ProblemTag, data: dict) -> GraphData:
    nodes = data.get("nodes")
    if nodes is not None and not _is_int(nodes):
        raise TagDataMismatch(f"field 'nodes' must be an integer, got {nodes!r}")
    if tag == T.TSP and "distance_matrix" in data:
        n, edges = edges_from_distances(data["distance_matrix"])
    elif "edges" in data:
        edges, n = _edges_from_list(data["edges"]), None
    elif "matrix" in data:
        n, edges = edges_from_matrix(data["matrix"])
    else:
        need = "'distance_matrix' or 'edges'" if tag == T.TSP else "'edges' or 'matrix'"
        raise MissingDataField(f"{tag.display} requires data field {need}")
    if nodes is not None:
        n = nodes
    k = _int_field(data, "k", tag) if tag in K_TAGS else None
    return GraphData.from_edges(edges, n, k)


def instance_from_data(tag: ProblemTag, data: dict) -> ProblemInstance:
    if not isinstance(data, dict):
        raise MissingDataField("'data' must be an object")
    if tag in GRAPH_TAGS:
        return validate_instance(ProblemInstance(tag, _graph_from_data(tag, data)))
    if tag == T.FACTORIZATION:
        return validate_instance(ProblemInstance(tag, _int_field(data, "N", tag)))
    a, b = _int_field(data, "a", tag), _int_field(data, "b", tag)
    widths = {}
    for key in ("width_a", "width_b", "width_c"):
        if data.get(key) is not None:
            widths[key] = _int_field(data, key, tag)
    if a < 0 or b < 0:
        raise TagDataMismatch("operands must be non-negative")
    return validate_instance(ProblemInstance(tag, ArithmeticOperands.auto(tag, a, b, **widths)))


def parse_json_spec(text: str | bytes) -> ProblemInstance:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise JsonSyntaxError(f"invalid JSON: {e}") from None
    return parse_spec_dict(doc)


def parse_spec_dict(doc: Any) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise MissingDataField("specification must be a JSON object")
    if "problem_type" not in doc:
        raise MissingDataField("specification requires 'problem_type'")
    tag = tag_from_name(doc["problem_type"])
    if "data" not in doc:
        raise MissingDataField("specification requires 'data'")
    return instance_from_data(tag, doc["data"])


def spec_dict(inst: ProblemInstance) -> dict:
    """Inverse of parse_spec_dict on validated instances."""
    tag, d = inst.tag, inst.data
    if isinstance(d, GraphData):
        data: dict[str, Any] = {"nodes": d.node_count, "edges": [[u, v, w] for u, v, w in d.edges]}
        if d.k is not None:
            data["k"] = d.k
    elif isinstance(d, ArithmeticOperands):
        data = {"a": d.a, "b": d.b, "width_a": d.width_a, "width_b": d.width_b}
        if d.width_c is not None:
            data["width_c"] = d.width_c
    else:
        data = {"N": d}
    return {"problem_type": tag.display, "data": data}


def serialize_instance(inst: ProblemInstance) -> str:
    return json.dumps(spec_dict(inst))


# ------------------------------------------------------------------ snippets


@dataclass(frozen=True)
class SnippetSource:
    text: str


# graph-building and builtin calls carry no problem cue
NEUTRAL_CALLS = frozenset({
    "add_edge", "add_edges_from", "add_weighted_edges_from", "add_node", "add_nodes_from",
    "print", "len", "range", "list", "tuple", "int", "float", "dict", "set", "sorted",
    "graph", "array", "asarray", "matrix",
})

K_NAMES = ("k", "num_colors", "n_colors", "colors", "clique_size", "cover_size", "size")
N_NAMES = ("N", "number", "num", "composite", "value")
NODE_NAMES = ("num_nodes", "n_nodes", "nodes", "num_vertices", "n_vertices", "n", "vertices")
OPERAND_NAMES = (("a", "b"), ("x", "y"), ("lhs", "rhs"))


def _words(text: str) -> list[str]:
    text = re.sub(r"([a-z0-9])([A-Z])", r"\1 \2", text)
    return re.findall(r"[a-z0-9]+", text.lower())


@lru_cache(maxsize=1)
def cue_lexicon() -> tuple[tuple[tuple[str, ...], ProblemTag], ...]:
    raw = json.loads(resources.files("qbridge.data").joinpath("cue_lexicon.json").read_text())
    out = []
    for name, phrases in raw.items():
        tag = tag_from_name(name)
        for p in phrases:
            out.append((tuple(_words(p)), tag))
    return tuple(out)


def _contains(seq: list[str], phrase: tuple[str, ...]) -> bool:
    m = len(phrase)
    return any(tuple(seq[i : i + m]) == phrase for i in range(len(seq) - m + 1))


def _cue_tags(sources: list[list[str]]) -> set[ProblemTag]:
    tags = set()
    for words in sources:
        for phrase, tag in cue_lexicon():
            if _contains(words, phrase):
                tags.add(tag)
    return tags


def _comments(text: str) -> list[str]:
    out = []
    try:
        for tok in tokenize.generate_tokens(io.StringIO(text).readline):
            if tok.type == tokenize.COMMENT:
                out.append(tok.string.lstrip("#"))
    except (tokenize.TokenError, IndentationError, SyntaxError):
        pass
    return out


def _call_name(node: ast.expr) -> str | None:
    parts = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if isinstance(node, ast.Name):
        return node.id if not parts else parts[0]
    return None


def _literal(node: ast.expr):
    try:
        return ast.literal_eval(node)
    except (ValueError, TypeError, SyntaxError, MemoryError, RecursionError):
        return _NOT_LITERAL


_NOT_LITERAL = object()


def _simple_arg(node: ast.expr) -> bool:
    return isinstance(node, ast.Name) or _literal(node) is not _NOT_LITERAL


@dataclass
class _Scan:
    assigns: list[tuple[str, Any]]  # literal assignments in source order
    call_args: list[Any]  # literal positional arguments of calls
    call_kwargs: dict[str, Any]
    calls: list[str]
    docstrings: list[str]
    in_subset: bool


def _scan(text: str) -> _Scan | None:
    try:
        tree = ast.parse(text)
    except (SyntaxError, ValueError):
        return None
    scan = _Scan([], [], {}, [], [], True)

    def visit_call(call: ast.Call) -> bool:
        name = _call_name(call.func)
        if name is None:
            return False
        scan.calls.append(name)
        ok = True
        for a in call.args:
            if not _simple_arg(a):
                ok = False
                continue
            v = _literal(a)
            if v is not _NOT_LITERAL:
                scan.call_args.append(v)
        for kw in call.keywords:
            if kw.arg is None or not _simple_arg(kw.value):
                ok = False
                continue
            v = _literal(kw.value)
            if v is not _NOT_LITERAL:
                scan.call_kwargs.setdefault(kw.arg, v)
        return ok

    for stmt in tree.body:
        if isinstance(stmt, (ast.Import, ast.ImportFrom, ast.Pass)):
            continue
        if isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Call):
            scan.in_subset &= visit_call(stmt.value)
            continue
        if isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant) and isinstance(stmt.value.value, str):
            scan.docstrings.append(stmt.value.value)
            continue
        if (isinstance(stmt, ast.Assign) and len(stmt.targets) == 1
                and isinstance(stmt.targets[0], ast.Name)):
            name = stmt.targets[0].id
            if isinstance(stmt.value, ast.Call):
                scan.in_subset &= visit_call(stmt.value)
                continue
            v = _literal(stmt.value)
            if v is not _NOT_LITERAL and _allowed_literal(v):
                scan.assigns.append((name, v))
                continue
        scan.in_subset = False
    return scan


def _allowed_literal(v) -> bool:
    if _is_int(v) or isinstance(v, float):
        return True
    if isinstance(v, (list, tuple)):
        return all(_is_num(x) or (isinstance(x, (list, tuple)) and all(_is_num(y) for y in x)) for x in v)
    return False


def _edge_shape(v) -> bool:
    if not isinstance(v, (list, tuple)):
        return False
    for e in v:
        if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
            return False
        if not (_is_int(e[0]) and _is_int(e[1]) and e[0] >= 0 and e[1] >= 0):
            return False
        if len(e) == 3 and not _is_num(e[2]):
            return False
    return True


def _matrix_shape(v) -> bool:
    if not isinstance(v, (list, tuple)) or len(v) < 2:
        return False
    rows = [list(r) if isinstance(r, (list, tuple)) else None for r in v]
    if any(r is None for r in rows):
        return False
    try:
        edges_from_matrix(rows)
    except MalformedGraph:
        return False
    return True


_EDGE_HINT = re.compile(r"edge", re.I)
_MATRIX_HINT = re.compile(r"mat|adj|dist|weight|cost", re.I)


def _graph_literal(scan: _Scan, tag: ProblemTag):
    """Pick the literal that carries the graph: ('edges', list) or ('matrix', rows)."""
    named = [(n, v) for n, v in scan.assigns if isinstance(v, (list, tuple))]
    anon = [(None, v) for v in scan.call_args if isinstance(v, (list, tuple))]
    for name, v in named + anon:
        hint_edges = bool(name and _EDGE_HINT.search(name))
        hint_matrix = bool(name and _MATRIX_HINT.search(name))
        if _matrix_shape(v) and not hint_edges:
            return "matrix", [list(r) for r in v]
        if _edge_shape(v) and not hint_matrix:
            return "edges", [tuple(e) for e in v]
    return None


def _named_int(scan: _Scan, names) -> int | None:
    for want in names:
        for name, v in scan.assigns:
            if name == want and _is_int(v):
                return v
        if want in scan.call_kwargs and _is_int(scan.call_kwargs[want]):
            return scan.call_kwargs[want]
    return None


def _scalar_ints(scan: _Scan) -> list[int]:
    return [v for _, v in scan.assigns if _is_int(v)] + [v for v in scan.call_args if _is_int(v)]


def _operands(scan: _Scan) -> tuple[int, int] | None:
    for na, nb in OPERAND_NAMES:
        a, b = _named_int(scan, (na,)), _named_int(scan, (nb,))
        if a is not None and b is not None:
            return a, b
    ints = _scalar_ints(scan)
    if len(ints) == 2:
        return ints[0], ints[1]
    return None


def _factor_n(scan: _Scan) -> int | None:
    n = _named_int(scan, N_NAMES)
    if n is not None:
        return n
    ints = _scalar_ints(scan)
    return ints[0] if len(ints) == 1 else None


def _raw_data(scan: _Scan, tag: ProblemTag) -> dict | None:
    """Data fields for `tag` recovered from literals, or None when the shape is absent."""
    if tag in GRAPH_TAGS:
        lit = _graph_literal(scan, tag)
        if lit is None:
            return None
        kind, value = lit
        data: dict[str, Any] = {}
        if kind == "matrix":
            data["distance_matrix" if tag == T.TSP else "matrix"] = value
        else:
            data["edges"] = [list(e) for e in value]
            nodes = _named_int(scan, NODE_NAMES)
            if nodes is None:
                node_list = [v for n, v in scan.assigns if n in NODE_NAMES and isinstance(v, (list, tuple))]
                if node_list and all(_is_int(x) for x in node_list[0]):
                    nodes = max(node_list[0], default=-1) + 1
            if nodes is not None:
                data["nodes"] = nodes
        if tag in K_TAGS:
            k = _named_int(scan, K_NAMES)
            if k is None:
                return None
            data["k"] = k
        return data
    if tag == T.FACTORIZATION:
        n = _factor_n(scan)
        return None if n is None else {"N": n}
    if tag in ARITH_TAGS:
        ops = _operands(scan)
        return None if ops is None else {"a": ops[0], "b": ops[1]}
    return None


def classify_snippet(src: SnippetSource | str) -> ProblemTag:
    """Cue lexicon lookup; Unknown on no cue, conflicting cues, grammar violations or missing data."""
    text = src.text if isinstance(src, SnippetSource) else src
    scan = _scan(text)
    if scan is None or not scan.in_subset:
        return T.UNKNOWN
    sources = [_words(c) for c in _comments(text) + scan.docstrings]
    sources += [_words(c) for c in scan.calls if c.lower() not in NEUTRAL_CALLS]
    tags = _cue_tags(sources)
    if len(tags) != 1:
        return T.UNKNOWN
    tag = tags.pop()
    return tag if _raw_data(scan, tag) is not None else T.UNKNOWN


def extract_snippet_data(src: SnippetSource | str, tag: ProblemTag) -> ProblemInstance:
    text = src.text if isinstance(src, SnippetSource) else src
    if tag == T.UNKNOWN:
        raise TagDataMismatch("cannot extract data for the Unknown tag")
    scan = _scan(text)
    if scan is None:
        raise ExtractionFailed("snippet is not parseable source text")
    data = _raw_data(scan, tag)
    if data is None:
        raise ExtractionFailed(f"no literal of the shape {tag.display} needs was found")
    return instance_from_data(tag, data)


def parse_snippet(src: SnippetSource | str) -> ProblemInstance:
    tag = classify_snippet(src)
    if tag == T.UNKNOWN:
        raise UnknownProblemType("snippet could not be classified")
    return extract_snippet_data(src, tag)
