"""Explored crystal components and what can be read off them.

A ``CrystalGraph`` is a finite piece of a crystal: every node carries its
cached weight and ``eps``/``phi`` vectors, and every node has been expanded,
i.e. ``e_i`` and ``f_i`` were evaluated for all ``i``.  An operator result
that was not added to the graph (depth bound, or a direction that was not
followed) is kept as a dangling target so checks can tell "leaves the
explored region" apart from "is zero".
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .cartan import CartanSpec, parse_cartan
from .core import Crystal, ext_parse, ext_str

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "KCRYSTALS_NODE_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


@dataclass(frozen=True)
class NodeData:
    wt: tuple
    eps: tuple
    phi: tuple
    label: str


@dataclass(frozen=True)
class External:
    """Stand-in for an operator target outside a graph loaded from JSON."""

    label: str


@dataclass
class CrystalGraph:
    spec: CartanSpec
    index_set: tuple
    nodes: dict = field(default_factory=dict)
    f_edges: dict = field(default_factory=dict)
    e_edges: dict = field(default_factory=dict)
    sources: list = field(default_factory=list)
    truncated: bool = False
    depth: int | None = None
    axiom_unsafe: bool = False

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, b):
        return b in self.nodes

    def f(self, i, b):
        return self.f_edges[(b, i)]

    def e(self, i, b):
        return self.e_edges[(b, i)]

    def col(self, i) -> int:
        return self.index_set.index(i)

    def eps(self, i, b):
        return self.nodes[b].eps[self.col(i)]

    def phi(self, i, b):
        return self.nodes[b].phi[self.col(i)]

    def edges(self):
        """f-edges ``(a, i, b)`` with both ends in the graph, in node order."""
        out = []
        for a in self.nodes:
            for i in self.index_set:
                b = self.f_edges.get((a, i))
                if b is not None and b in self.nodes:
                    out.append((a, i, b))
        return out

    def e_arrows(self):
        out = []
        for a in self.nodes:
            for i in self.index_set:
                b = self.e_edges.get((a, i))
                if b is not None and b in self.nodes:
                    out.append((a, i, b))
        return out

    def copy(self) -> "CrystalGraph":
        return CrystalGraph(self.spec, self.index_set, dict(self.nodes), dict(self.f_edges),
                            dict(self.e_edges), list(self.sources), self.truncated, self.depth,
                            self.axiom_unsafe)


class BudgetExceeded(RuntimeError):
    def __init__(self, graph: CrystalGraph, budget: int):
        super().__init__(f"exploration exceeded the node budget of {budget}")
        self.graph = graph
        self.budget = budget


def node_data(B: Crystal, b, index_set) -> NodeData:
    return NodeData(tuple(B.wt(b)), tuple(B.eps(i, b) for i in index_set),
                    tuple(B.phi(i, b) for i in index_set), B.render(b))


def explore(B: Crystal, seeds, depth: int | None = None, direction: str = "both",
            budget: int | None = None) -> CrystalGraph:
    """Breadth-first closure of ``seeds`` under the chosen operators.

    ``direction`` is ``"f"``, ``"e"`` or ``"both"``.  Node order is BFS layer,
    then insertion order, with ``f_i`` tried before ``e_i`` and labels in
    index order.  Nodes in the last layer are still expanded; if one of them
    has a successor outside the graph, ``truncated`` is set.
    """
    if direction not in ("f", "e", "both"):
        raise ValueError(f"unknown direction {direction!r}")
    budget = default_budget() if budget is None else budget
    I = B.index_set
    G = CrystalGraph(B.spec, I, axiom_unsafe=B.axiom_unsafe, depth=depth)
    layer = []
    for s in seeds:
        if s not in G.nodes:
            G.nodes[s] = node_data(B, s, I)
            G.sources.append(s)
            layer.append(s)
    follow_f = direction in ("f", "both")
    follow_e = direction in ("e", "both")
    d = 0
    while layer:
        last = depth is not None and d >= depth
        nxt = []
        for b in layer:
            for i in I:
                tf = B.f(i, b)
                te = B.e(i, b)
                G.f_edges[(b, i)] = tf
                G.e_edges[(b, i)] = te
                for t, follow in ((tf, follow_f), (te, follow_e)):
                    if t is None or not follow or t in G.nodes:
                        continue
                    if last:
                        G.truncated = True
                        continue
                    G.nodes[t] = node_data(B, t, I)
                    nxt.append(t)
                    if len(G.nodes) > budget:
                        G.truncated = True
                        raise BudgetExceeded(G, budget)
        layer = nxt
        d += 1
    return G


def hw_elements(G: CrystalGraph) -> list:
    """Nodes killed by every ``e_i``."""
    return [b for b in G.nodes if all(G.e_edges.get((b, i), 0) is None for i in G.index_set)]


def lw_elements(G: CrystalGraph) -> list:
    return [b for b in G.nodes if all(G.f_edges.get((b, i), 0) is None for i in G.index_set)]


@dataclass
class SemiNormalResult:
    ok: bool | None
    witness: tuple | None = None
    checked: int = 0
    skipped: int = 0

    def __bool__(self):
        return self.ok is True


def string_length(G: CrystalGraph, b, i, op: str):
    """Number of ``op_i`` steps from ``b`` before zero, or ``None`` if unknown."""
    edges = G.f_edges if op == "f" else G.e_edges
    x, k = b, 0
    for _ in range(len(G.nodes) + 1):
        if x not in G.nodes or (x, i) not in edges:
            return None
        t = edges[(x, i)]
        if t is None:
            return k
        x, k = t, k + 1
    return None


def is_semi_normal(G: CrystalGraph, labels=None) -> SemiNormalResult:
    """``eps_i``/``phi_i`` equal the lengths of the ``e_i``/``f_i`` strings.

    Nodes whose strings leave the explored region are skipped; the result is
    ``None`` (inconclusive) if anything was skipped and nothing failed.
    """
    labels = G.index_set if labels is None else labels
    checked = skipped = 0
    for b in G.nodes:
        for i in labels:
            ne = string_length(G, b, i, "e")
            nf = string_length(G, b, i, "f")
            if ne is None or nf is None:
                skipped += 1
                continue
            checked += 1
            if G.eps(i, b) != ne:
                return SemiNormalResult(False, (b, i, "eps", G.eps(i, b), ne), checked, skipped)
            if G.phi(i, b) != nf:
                return SemiNormalResult(False, (b, i, "phi", G.phi(i, b), nf), checked, skipped)
    return SemiNormalResult(True if skipped == 0 else None, None, checked, skipped)


class DisconnectedError(ValueError):
    pass


def canonical_form(G: CrystalGraph, root) -> bytes:
    """Certificate of the rooted graph; equal bytes iff isomorphic.

    Nodes are renumbered in BFS order from ``root`` following ``f_i`` then
    ``e_i`` for each label in order.  Each record holds the weight, ``eps``
    and ``phi`` vectors and the renumbered operator targets (``null`` for
    zero, ``"x"`` for a target outside the graph).  Labels are not part of
    the certificate.
    """
    if root not in G.nodes:
        raise ValueError("root is not a node of the graph")
    ids = {root: 0}
    order = [root]
    k = 0
    while k < len(order):
        b = order[k]
        k += 1
        for i in G.index_set:
            for t in (G.f_edges.get((b, i)), G.e_edges.get((b, i))):
                if t is not None and t in G.nodes and t not in ids:
                    ids[t] = len(order)
                    order.append(t)
    if len(order) != len(G.nodes):
        raise DisconnectedError(f"{len(G.nodes) - len(order)} nodes unreachable from the root")

    def ref(t):
        if t is None:
            return None
        return ids.get(t, "x")

    recs = []
    for b in order:
        nd = G.nodes[b]
        ops = [[ref(G.f_edges.get((b, i))), ref(G.e_edges.get((b, i)))] for i in G.index_set]
        recs.append([list(nd.wt), [ext_str(x) for x in nd.eps], [ext_str(x) for x in nd.phi], ops])
    doc = {"index_set": list(G.index_set), "truncated": G.truncated, "nodes": recs}
    return json.dumps(doc, separators=(",", ":")).encode()


def weight_multiset(G: CrystalGraph) -> dict:
    out = {}
    for nd in G.nodes.values():
        out[nd.wt] = out.get(nd.wt, 0) + 1
    return out


def components(G: CrystalGraph, labels=None) -> list:
    """Connected components (undirected, using edges with labels in ``labels``)."""
    labels = G.index_set if labels is None else tuple(labels)
    adj = {b: [] for b in G.nodes}
    for edges in (G.f_edges, G.e_edges):
        for (a, i), t in edges.items():
            if i in labels and t is not None and t in adj and a in adj:
                adj[a].append(t)
                adj[t].append(a)
    seen = set()
    comps = []
    for b in G.nodes:
        if b in seen:
            continue
        comp = [b]
        seen.add(b)
        k = 0
        while k < len(comp):
            for t in adj[comp[k]]:
                if t not in seen:
                    seen.add(t)
                    comp.append(t)
            k += 1
        comps.append(comp)
    return comps


# ---------------------------------------------------------------------------
# Serialization

def to_json(G: CrystalGraph) -> dict:
    ids = {b: n for n, b in enumerate(G.nodes)}
    nodes = [{"id": ids[b], "wt": list(nd.wt), "eps": [ext_str(x) for x in nd.eps],
              "phi": [ext_str(x) for x in nd.phi], "label": nd.label}
             for b, nd in G.nodes.items()]

    def arrows(edges):
        out = []
        for b in G.nodes:
            for i in G.index_set:
                t = edges.get((b, i))
                if t is None:
                    continue
                rec = {"src": ids[b], "i": i, "dst": ids.get(t)}
                if t not in ids:
                    rec["dst_label"] = t.label if isinstance(t, External) else str(t)
                out.append(rec)
        return out

    return {
        "cartan": {"name": G.spec.name, "labels": list(G.spec.labels), "gcm": [list(r) for r in G.spec.gcm]},
        "index_set": list(G.index_set),
        "nodes": nodes,
        "edges": arrows(G.f_edges),
        "e_edges": arrows(G.e_edges),
        "sources": [ids[s] for s in G.sources],
        "truncated": G.truncated,
        "depth": G.depth,
        "axiom_unsafe": G.axiom_unsafe,
    }


def from_json(doc: dict) -> CrystalGraph:
    """Rebuild a graph; node labels become the elements.

    Without an ``e_edges`` list the ``e`` arrows are taken to be the reversed
    ``f`` arrows.
    """
    c = doc["cartan"]
    if c.get("name"):
        spec = parse_cartan(c["name"])
    else:
        spec = parse_cartan(json.dumps({"labels": c["labels"], "gcm": c["gcm"]}))
    I = tuple(str(i) for i in doc.get("index_set", spec.labels))
    G = CrystalGraph(spec, I, truncated=bool(doc.get("truncated", False)), depth=doc.get("depth"),
                     axiom_unsafe=bool(doc.get("axiom_unsafe", False)))
    by_id = {}
    for rec in doc["nodes"]:
        lab = rec.get("label", str(rec["id"]))
        by_id[rec["id"]] = lab
        G.nodes[lab] = NodeData(tuple(rec["wt"]), tuple(ext_parse(x) for x in rec["eps"]),
                                tuple(ext_parse(x) for x in rec["phi"]), lab)
    for b in G.nodes:
        for i in I:
            G.f_edges[(b, i)] = None
            G.e_edges[(b, i)] = None

    def target(rec):
        if rec.get("dst") is None:
            return External(rec.get("dst_label", "?"))
        return by_id[rec["dst"]]

    for rec in doc["edges"]:
        G.f_edges[(by_id[rec["src"]], str(rec["i"]))] = target(rec)
    if "e_edges" in doc:
        for rec in doc["e_edges"]:
            G.e_edges[(by_id[rec["src"]], str(rec["i"]))] = target(rec)
    else:
        for rec in doc["edges"]:
            if rec.get("dst") is not None:
                G.e_edges[(by_id[rec["dst"]], str(rec["i"]))] = by_id[rec["src"]]
    G.sources = [by_id[s] for s in doc.get("sources", [])]
    return G


def dumps(G: CrystalGraph) -> str:
    return json.dumps(to_json(G), indent=1, sort_keys=True)


def loads(text: str) -> CrystalGraph:
    return from_json(json.loads(text))


def to_dot(G: CrystalGraph, name: str = "crystal") -> str:
    ids = {b: n for n, b in enumerate(G.nodes)}
    lines = [f"digraph {name} {{"]
    for b, nd in G.nodes.items():
        lab = nd.label.replace('"', r'\"')
        shape = ', shape=box' if b in G.sources else ''
        lines.append(f'  n{ids[b]} [label="{lab}"{shape}];')
    for a, i, b in G.edges():
        lines.append(f'  n{ids[a]} -> n{ids[b]} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
