"""Regenerate the ingestion corpora under corpus/.

corpus/json/*.json           specifications in the problem_type / data format
corpus/snippets.json         structured snippets with their expected tag
corpus/adversarial.json      out-of-subset snippets that must classify as Unknown
"""

from __future__ import annotations

import itertools
import json
import random
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "corpus"

GRAPH_TAGS = ["MaxCut", "MIS", "TSP", "Clique", "KColor", "VertexCover"]
ALIASES = {
    "MaxCut": ["MaxCut", "maxcut", "MAXCUT"],
    "MIS": ["MIS", "mis"],
    "TSP": ["TSP", "tsp"],
    "Clique": ["Clique", "clique", "CLIQUE"],
    "KColor": ["KColor", "kcolor", "K-Color"],
    "VertexCover": ["VC", "VertexCover", "vertex_cover", "vc"],
    "Factorization": ["Factorization", "Factor", "factor"],
    "Add": ["ADD", "Add", "add"],
    "Mul": ["MUL", "Mul", "mul"],
    "Sub": ["SUB", "Sub", "sub"],
}


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> list[tuple[int, int]]:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    return edges


def graph_data(rng: random.Random, tag: str, i: int) -> dict:
    n = rng.randint(3, 7)
    if tag == "TSP":
        if i % 2 == 0:
            m = [[0] * n for _ in range(n)]
            for a, b in itertools.combinations(range(n), 2):
                m[a][b] = m[b][a] = rng.randint(1, 20)
            return {"distance_matrix": m}
        return {"edges": [[a, b, rng.randint(1, 20)] for a, b in itertools.combinations(range(n), 2)]}
    edges = random_graph(rng, n)
    style = i % 4
    if style == 0:
        data = {"edges": [list(e) for e in edges]}
    elif style == 1:
        data = {"edges": [[a, b, round(rng.uniform(0.5, 3.0), 2)] for a, b in edges]}
    elif style == 2:
        m = [[0] * n for _ in range(n)]
        for a, b in edges:
            m[a][b] = m[b][a] = 1
        data = {"matrix": m}
    else:
        data = {"edges": [list(e) for e in edges], "nodes": n + 1}
    if tag in ("Clique", "KColor", "VertexCover"):
        data["k"] = rng.randint(2, 3)
    return data


def composite(rng: random.Random) -> int:
    while True:
        p, q = rng.randint(2, 40), rng.randint(2, 40)
        if p * q >= 4:
            return p * q


def json_corpus(rng: random.Random) -> list[tuple[str, dict]]:
    out = []
    for tag, names in ALIASES.items():
        for i in range(10):
            name = names[i % len(names)]
            if tag in GRAPH_TAGS:
                data = graph_data(rng, tag, i)
            elif tag == "Factorization":
                data = {"N": composite(rng)}
            else:
                data = {"a": rng.randint(0, 15), "b": rng.randint(0, 15)}
                if i % 3 == 0:
                    data["width_a"] = data["width_b"] = 5
            out.append((tag, {"problem_type": name, "data": data}))
    return out


# ------------------------------------------------------------ snippets

CALLS = {
    "MaxCut": ["max_cut", "solve_maxcut", "maximum_cut", "maxcut"],
    "MIS": ["maximum_independent_set", "independent_set", "find_mis", "solve_mis"],
    "TSP": ["solve_tsp", "traveling_salesman", "tsp_solver", "shortest_tour"],
    "Clique": ["find_clique", "max_clique", "clique_of_size", "k_clique"],
    "KColor": ["graph_coloring", "k_coloring", "color_graph", "chromatic_assignment"],
    "VertexCover": ["vertex_cover", "min_vertex_cover", "solve_vertex_cover", "node_cover"],
    "Factorization": ["factorize", "prime_factors", "factor", "factorise"],
    "Add": ["add", "quantum_adder", "addition", "add_numbers"],
    "Mul": ["multiply", "multiplier", "multiplication", "mul"],
    "Sub": ["subtract", "subtractor", "subtraction", "sub"],
}
COMMENTS = {
    "MaxCut": "Partition the vertices to get the max cut",
    "MIS": "Find a maximum independent set of the graph",
    "TSP": "Traveling salesman over the cities below",
    "Clique": "Look for a clique with k vertices",
    "KColor": "Graph coloring with k colours",
    "VertexCover": "Smallest vertex cover of the network",
    "Factorization": "Prime factors of a composite number",
    "Add": "Addition of two integers",
    "Mul": "Multiplication of two integers",
    "Sub": "Subtraction of two integers",
}


def _edges_literal(edges, weighted=False, rng=None) -> str:
    if weighted:
        return "[" + ", ".join(f"({a}, {b}, {rng.randint(1, 9)})" for a, b in edges) + "]"
    return "[" + ", ".join(f"({a}, {b})" for a, b in edges) + "]"


def graph_snippet(rng: random.Random, tag: str, i: int) -> str:
    n = rng.randint(3, 6)
    edges = random_graph(rng, n)
    call = CALLS[tag][i % 4]
    k_line = f"k = {rng.randint(2, 3)}\n" if tag in ("Clique", "KColor", "VertexCover") else ""
    k_arg = ", k" if k_line else ""
    if tag == "TSP":
        edges = list(itertools.combinations(range(n), 2))
    style = i % 5
    if style == 0:
        return f"# {COMMENTS[tag]}\nedges = {_edges_literal(edges)}\n{k_line}result = {call}(edges{k_arg})\n"
    if style == 1:
        return (f"import networkx as nx\n\nG = nx.Graph()\nG.add_edges_from({_edges_literal(edges)})\n"
                f"{k_line}answer = {call}(G{k_arg})\nprint(answer)\n")
    if style == 2:
        m = [[0] * n for _ in range(n)]
        for a, b in edges:
            w = rng.randint(1, 9) if tag == "TSP" else 1
            m[a][b] = m[b][a] = w
        name = "distances" if tag == "TSP" else "adjacency"
        rows = ",\n    ".join(str(r) for r in m)
        return f"{name} = [\n    {rows},\n]\n{k_line}# {COMMENTS[tag]}\n{call}({name}{k_arg})\n"
    if style == 3:
        return (f'"""{COMMENTS[tag]}."""\nnum_nodes = {n}\nedge_list = {_edges_literal(edges, True, rng)}\n'
                f"{k_line}solution = {call}(edge_list, num_nodes{k_arg})\n")
    return f"edges = {_edges_literal(edges)}; {k_line.strip() + '; ' if k_line else ''}{call}(edges{k_arg})\n"


def number_snippet(rng: random.Random, tag: str, i: int) -> str:
    call = CALLS[tag][i % 4]
    if tag == "Factorization":
        N = composite(rng)
        style = i % 3
        if style == 0:
            return f"N = {N}\nfactors = {call}(N)\n"
        if style == 1:
            return f"# {COMMENTS[tag]}\nnumber = {N}\nresult = {call}(number)\nprint(result)\n"
        return f"{call}({N})\n"
    a, b = rng.randint(0, 15), rng.randint(0, 15)
    style = i % 4
    if style == 0:
        return f"a = {a}\nb = {b}\nresult = {call}(a, b)\n"
    if style == 1:
        return f"# {COMMENTS[tag]}\nx = {a}; y = {b}\nz = {call}(x, y)\nprint(z)\n"
    if style == 2:
        return f"{call}({a}, {b})\n"
    return f"lhs = {a}\nrhs = {b}\n# {COMMENTS[tag]}\nout = {call}(lhs, rhs)\n"


def snippet_corpus(rng: random.Random) -> list[dict]:
    out = []
    for tag in ALIASES:
        for i in range(10):
            text = graph_snippet(rng, tag, i) if tag in GRAPH_TAGS else number_snippet(rng, tag, i)
            out.append({"id": f"{tag.lower()}_{i:02d}", "expected": tag, "text": text})
    return out


ADVERSARIAL = [
    ("file_io", '# max cut\nwith open("graph.txt") as f:\n    edges = [tuple(map(int, l.split())) for l in f]\nmax_cut(edges)\n'),
    ("for_loop", "# max cut\nedges = []\nfor i in range(5):\n    edges.append((i, i + 1))\nmax_cut(edges)\n"),
    ("comprehension", "edges = [(i, (i + 1) % 6) for i in range(6)]\nsolve_maxcut(edges)\n"),
    ("random_graph", "import networkx as nx\nG = nx.erdos_renyi_graph(8, 0.3)\nmax_cut(G)\n"),
    ("conflicting_comment", "# max cut or independent set, whichever is easier\nedges = [(0, 1), (1, 2)]\nsolve(edges)\n"),
    ("conflicting_calls", "a = 3\nb = 5\nadd(a, b)\nmultiply(a, b)\n"),
    ("no_cue", "edges = [(0, 1), (1, 2), (2, 0)]\nresult = solve(edges)\n"),
    ("cue_without_data", "# traveling salesman\nroute = plan_route(cities)\n"),
    ("mis_only_integer", "# independent set\nn = 5\n"),
    ("add_one_operand", "a = 3\nadd(a)\n"),
    ("function_def", "def max_cut(edges):\n    return 0\nedges = [(0, 1)]\nmax_cut(edges)\n"),
    ("class_def", "class Graph:\n    pass\n# vertex cover\nk = 2\n"),
    ("string_data", '# max cut\nedges = "0-1,1-2,2-0"\nmax_cut(edges)\n'),
    ("eval_input", "# max cut\nedges = eval(input())\nmax_cut(edges)\n"),
    ("syntax_error", "edges = [(0, 1), (1, 2)\nmax_cut(edges)\n"),
    ("unsupported_problem", "# shortest path\nedges = [(0, 1, 4), (1, 2, 3)]\ndijkstra(edges, 0)\n"),
    ("knapsack", "# knapsack\nweights = [3, 4, 5]\nvalues = [4, 5, 6]\nknapsack(weights, values, 7)\n"),
    ("sorting", "# sort a list\nvalues = [3, 1, 2]\nsorted(values)\n"),
    ("primality", "# check whether the number is prime\nn = 17\nis_prime(n)\n"),
    ("matrix_multiply", "# multiply two matrices\nA = [[1, 2], [3, 4]]\nB = [[5, 6], [7, 8]]\nmatmul(A, B)\n"),
    ("dict_graph", "# max cut\ngraph = {0: [1, 2], 1: [0]}\nmax_cut(graph)\n"),
    ("while_loop", "# factorize\nN = 15\nd = 2\nwhile N % d:\n    d = d + 1\n"),
    ("if_statement", "a = 3\nb = 5\nif a < b:\n    add(a, b)\n"),
    ("augmented_assign", "a = 3\nb = 5\na += 1\nadd(a, b)\n"),
    ("tuple_unpacking", "a, b = 3, 5\nadd(a, b)\n"),
    ("attribute_assign", "# max cut\nedges = [(0, 1)]\nG.name = 'triangle'\nmax_cut(edges)\n"),
    ("float_operands", "a = 2.5\nb = 1.5\nadd(a, b)\n"),
    ("negative_index_edges", "# max cut\nedges = [(-1, 0), (0, 1)]\nmax_cut(edges)\n"),
    ("chained_assign", "a = b = 3\nadd(a, b)\n"),
    ("empty", ""),
    ("whitespace", "   \n\t\n"),
    ("comment_only", "# max cut of a triangle\n"),
    ("prose", "Please compute the max cut of the triangle graph with vertices 0, 1 and 2.\n"),
    ("json_text", '{"problem_type": "MaxCut", "data": {"edges": [[0, 1]]}}\n'),
    ("tsp_flat_list", "# tsp\ncities = [1, 2, 3]\nsolve_tsp(cities)\n"),
    ("clique_without_k", "# clique\nedges = [(0, 1), (1, 2), (0, 2)]\nfind_clique(edges)\n"),
    ("kcolor_without_k", "edges = [(0, 1), (1, 2)]\ngraph_coloring(edges)\n"),
    ("vc_without_k", "edges = [(0, 1), (1, 2)]\nvertex_cover(edges)\n"),
    ("ragged_distances", "# tsp\ndistances = [[0, 1, 2], [1, 0, 3]]\nsolve_tsp(distances)\n"),
    ("asymmetric_adjacency", "# max cut\nadj = [[0, 1], [0, 0]]\nmax_cut(adj)\n"),
    ("lambda", "# max cut\nscore = lambda s: 0\nedges = [(0, 1)]\nmax_cut(edges)\n"),
    ("cue_in_string", 'label = "max cut"\nedges = [(0, 1)]\nrun(edges)\n'),
    ("shell_command", "python solve.py --maxcut graph.txt\n"),
    ("cpp_code", "int main() { int a = 3, b = 5; return add(a, b); }\n"),
    ("zip_edges", "# max cut\nedges = list(zip(range(4), range(1, 5)))\nmax_cut(edges)\n"),
    ("random_edges", "import random\n# max cut\nedges = [(random.randint(0, 5), 2)]\nmax_cut(edges)\n"),
    ("mixed_comment_cues", "# factor 15 and then add 3\nN = 15\nfactorize(N)\n"),
    ("string_operand", "N = 'fifteen'\nfactorize(N)\n"),
    ("cue_as_variable", "edges = [(0, 1), (1, 2)]\nmaxcut = compute(edges)\n"),
    ("nested_call", "# max cut\nmax_cut(build_graph(edges))\n"),
]


def main() -> None:
    rng = random.Random(20250101)
    if ROOT.exists():
        shutil.rmtree(ROOT)
    (ROOT / "json").mkdir(parents=True)
    manifest = {}
    for idx, (tag, doc) in enumerate(json_corpus(rng)):
        name = f"{idx:03d}_{tag.lower()}.json"
        (ROOT / "json" / name).write_text(json.dumps(doc, indent=1) + "\n")
        manifest[name] = tag
    (ROOT / "json_manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    (ROOT / "snippets.json").write_text(json.dumps(snippet_corpus(rng), indent=1) + "\n")
    adv = [{"id": name, "expected": "Unknown", "text": text} for name, text in ADVERSARIAL]
    (ROOT / "adversarial.json").write_text(json.dumps(adv, indent=1) + "\n")
    print(f"wrote {len(manifest)} JSON specs, 100 snippets, {len(adv)} adversarial snippets to {ROOT}")


if __name__ == "__main__":
    main()
