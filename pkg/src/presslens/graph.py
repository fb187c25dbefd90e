"""Typed undirected co-occurrence graph over themes, identities, locations, sentiment."""

from __future__ import annotations

import json
import logging
import math
import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .corpus import Paragraph
from .mentions import IdentityMention
from .sentiment import SentimentPrediction

log = logging.getLogger(__name__)


class GraphError(ValueError):
    pass


class NodeKind(Enum):
    THEME = "theme"
    IDENTITY = "identity"
    LOCATION = "location"
    SENTIMENT = "sentiment"


# The only node-kind pairs that may be connected.
ADMISSIBLE_PAIRS = frozenset(
    frozenset(pair)
    for pair in (
        (NodeKind.THEME, NodeKind.IDENTITY),
        (NodeKind.THEME, NodeKind.LOCATION),
        (NodeKind.IDENTITY, NodeKind.LOCATION),
        (NodeKind.IDENTITY, NodeKind.SENTIMENT),
    )
)

DEFAULT_NODE_SIZE = 1.0


def node_id(kind: NodeKind, label: str) -> str:
    return f"{kind.value}:{label}"


def split_node_id(raw: str) -> tuple[NodeKind, str]:
    kind_part, sep, label = raw.partition(":")
    if not sep or not label:
        raise GraphError(f"malformed node id {raw!r}")
    try:
        return NodeKind(kind_part), label
    except ValueError:
        raise GraphError(f"unknown node kind in id {raw!r}") from None


@dataclass(frozen=True)
class GraphNode:
    """A typed node; identity nodes carry sentiment tallies and a data-driven size.

    Identity size is 1 - neutral/total over the identity's parsed predictions
    within the graph scope (0.0 when it has none); all other kinds use the
    constant default size.
    """

    id: str
    kind: NodeKind
    label: str
    size: float
    counts: tuple[int, int, int] | None = None  # (pos, neg, neu), identity nodes only


@dataclass(frozen=True)
class GraphEdge:
    """Undirected edge; endpoints stored in sorted id order, weight >= 1."""

    a: str
    b: str
    weight: int

    @property
    def thickness(self) -> float:
        return math.sqrt(self.weight)


@dataclass(frozen=True)
class GraphScope:
    """Paragraph filter for graph construction."""

    newspaper: str | None = None
    themes: frozenset[str] | None = None
    min_weight: int = 1
    date_from: date | None = None
    date_to: date | None = None

    def __post_init__(self) -> None:
        if self.min_weight < 1:
            raise GraphError("min_weight must be >= 1")

    def matches(self, paragraph: Paragraph) -> bool:
        if paragraph.theme is None:
            return False
        if self.newspaper is not None and paragraph.newspaper != self.newspaper:
            return False
        if self.themes is not None and paragraph.theme not in self.themes:
            return False
        if self.date_from is not None and paragraph.issue_date < self.date_from:
            return False
        if self.date_to is not None and paragraph.issue_date > self.date_to:
            return False
        return True


class CoocGraph:
    """Simple undirected graph; at most one edge per node pair, no self-loops."""

    def __init__(self, nodes: Iterable[GraphNode], edges: Iterable[GraphEdge]):
        self.nodes: dict[str, GraphNode] = {n.id: n for n in nodes}
        self.edges: dict[tuple[str, str], GraphEdge] = {}
        for edge in edges:
            key = tuple(sorted((edge.a, edge.b)))
            if edge.a == edge.b:
                raise GraphError(f"self-loop on {edge.a!r}")
            if key in self.edges:
                raise GraphError(f"duplicate edge {key}")
            if edge.weight < 1:
                raise GraphError(f"edge {key} weight must be >= 1")
            missing = [nid for nid in key if nid not in self.nodes]
            if missing:
                raise GraphError(f"edge references unknown node(s): {missing}")
            kinds = frozenset((self.nodes[key[0]].kind, self.nodes[key[1]].kind))
            if kinds not in ADMISSIBLE_PAIRS:
                raise GraphError(f"inadmissible edge kinds for {key}")
            self.edges[key] = GraphEdge(key[0], key[1], edge.weight)

    def weight(self, a: str, b: str) -> int:
        """Co-occurrence count between two nodes, order-insensitive; 0 if absent."""
        edge = self.edges.get(tuple(sorted((a, b))))
        return edge.weight if edge else 0

    def node_count(self) -> int:
        return len(self.nodes)

    def edge_count(self) -> int:
        return len(self.edges)


def build_graph(
    paragraphs: Sequence[Paragraph],
    mentions: Sequence[IdentityMention],
    predictions: Iterable[SentimentPrediction],
    scope: GraphScope | None = None,
) -> CoocGraph:
    """Count paragraph-level co-occurrences into a typed graph.

    Within each in-scope themed paragraph: (theme, identity) increments once
    per identity mention, (theme, location) once per location annotation,
    (identity, location) once per mention x location pair, and
    (identity, sentiment) once per parsed prediction of a mention there.
    Edges below scope.min_weight are dropped after counting, and nodes left
    isolated by that pruning are removed. Identity node sizes come from the
    full in-scope tallies, before pruning.
    """
    scope = scope or GraphScope()
    preds_by_id = {p.mention_id: p for p in predictions}
    mentions_by_paragraph: dict[str, list[IdentityMention]] = defaultdict(list)
    for m in mentions:
        mentions_by_paragraph[m.paragraph_id].append(m)

    weights: Counter = Counter()
    identity_tallies: dict[str, Counter] = defaultdict(Counter)
    matched = 0
    for paragraph in paragraphs:
        if not scope.matches(paragraph):
            continue
        matched += 1
        theme_id = node_id(NodeKind.THEME, paragraph.theme)
        para_mentions = mentions_by_paragraph.get(paragraph.paragraph_id, [])
        location_ids = [node_id(NodeKind.LOCATION, loc.text) for loc in paragraph.locations]
        for mention in para_mentions:
            identity_id = node_id(NodeKind.IDENTITY, mention.identity)
            weights[_key(theme_id, identity_id)] += 1
            for loc_id in location_ids:
                weights[_key(identity_id, loc_id)] += 1
            prediction = preds_by_id.get(mention.mention_id)
            if prediction is not None and prediction.label is not None:
                sentiment_id = node_id(NodeKind.SENTIMENT, prediction.label.value)
                weights[_key(identity_id, sentiment_id)] += 1
                identity_tallies[mention.identity][prediction.label.value] += 1
        for loc_id in location_ids:
            weights[_key(theme_id, loc_id)] += 1

    if matched == 0:
        log.warning("graph scope matched no paragraphs")

    kept = {key: w for key, w in weights.items() if w >= scope.min_weight}
    node_ids = {nid for key in kept for nid in key}
    nodes = [_make_node(nid, identity_tallies) for nid in sorted(node_ids)]
    edges = [GraphEdge(a, b, w) for (a, b), w in sorted(kept.items())]
    return CoocGraph(nodes, edges)


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _make_node(nid: str, identity_tallies: Mapping[str, Counter]) -> GraphNode:
    kind, label = split_node_id(nid)
    if kind is not NodeKind.IDENTITY:
        return GraphNode(nid, kind, label, DEFAULT_NODE_SIZE)
    tally = identity_tallies.get(label, Counter())
    counts = (tally["+"], tally["-"], tally["0"])
    total = sum(counts)
    size = 1.0 - tally["0"] / total if total else 0.0
    return GraphNode(nid, kind, label, size, counts)


def export_graph(graph: CoocGraph, fmt: str = "json") -> bytes:
    """Serialize with canonical node/edge order so output is byte-stable."""
    if fmt == "json":
        return _export_json(graph)
    if fmt == "graphml":
        return _export_graphml(graph)
    raise GraphError(f"unknown export format {fmt!r}")


def _export_json(graph: CoocGraph) -> bytes:
    nodes = []
    for nid in sorted(graph.nodes):
        node = graph.nodes[nid]
        record: dict = {
            "id": node.id,
            "kind": node.kind.value,
            "label": node.label,
            "size": round(node.size, 4),
        }
        if node.counts is not None:
            record["counts"] = {"pos": node.counts[0], "neg": node.counts[1], "neu": node.counts[2]}
        nodes.append(record)
    edges = [
        {
            "a": edge.a,
            "b": edge.b,
            "weight": edge.weight,
            "thickness": round(edge.thickness, 4),
        }
        for _, edge in sorted(graph.edges.items())
    ]
    text = json.dumps({"nodes": nodes, "edges": edges}, ensure_ascii=False, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_NODE_KEYS = (("kind", "string"), ("label", "string"), ("size", "double"))
_EDGE_KEYS = (("weight", "long"), ("thickness", "double"))


def _export_graphml(graph: CoocGraph) -> bytes:
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    for name, typ in _NODE_KEYS:
        ET.SubElement(root, "key", id=name, attrib={"for": "node", "attr.name": name, "attr.type": typ})
    for name, typ in _EDGE_KEYS:
        ET.SubElement(root, "key", id=name, attrib={"for": "edge", "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", id="G", edgedefault="undirected")
    for nid in sorted(graph.nodes):
        node = graph.nodes[nid]
        el = ET.SubElement(g, "node", id=nid)
        for name, value in (("kind", node.kind.value), ("label", node.label), ("size", repr(round(node.size, 4)))):
            data = ET.SubElement(el, "data", key=name)
            data.text = value
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        el = ET.SubElement(g, "edge", source=edge.a, target=edge.b)
        for name, value in (("weight", str(edge.weight)), ("thickness", repr(round(edge.thickness, 4)))):
            data = ET.SubElement(el, "data", key=name)
            data.text = value
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def import_graph_json(payload: bytes | str) -> CoocGraph:
    """Inverse of the JSON export (sizes/thicknesses carry export rounding)."""
    data = json.loads(payload)
    nodes = []
    for record in data["nodes"]:
        kind = NodeKind(record["kind"])
        counts = record.get("counts")
        nodes.append(
            GraphNode(
                id=record["id"],
                kind=kind,
                label=record["label"],
                size=record["size"],
                counts=(counts["pos"], counts["neg"], counts["neu"]) if counts else None,
            )
        )
    edges = [GraphEdge(e["a"], e["b"], e["weight"]) for e in data["edges"]]
    return CoocGraph(nodes, edges)


@dataclass(frozen=True)
class ScopeDiff:
    """Set comparison of two graphs built with newspaper-differing scopes."""

    a_only_nodes: tuple[str, ...]
    b_only_nodes: tuple[str, ...]
    shared_nodes: tuple[str, ...]
    shared_edge_weights: dict[tuple[str, str], tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "a_only_nodes": list(self.a_only_nodes),
            "b_only_nodes": list(self.b_only_nodes),
            "shared_nodes": list(self.shared_nodes),
            "shared_edges": [
                {"a": a, "b": b, "weight_a": wa, "weight_b": wb}
                for (a, b), (wa, wb) in sorted(self.shared_edge_weights.items())
            ],
        }


def diff_scopes(graph_a: CoocGraph, graph_b: CoocGraph) -> ScopeDiff:
    ids_a, ids_b = set(graph_a.nodes), set(graph_b.nodes)
    shared_edges = {
        key: (edge.weight, graph_b.edges[key].weight)
        for key, edge in graph_a.edges.items()
        if key in graph_b.edges
    }
    return ScopeDiff(
        a_only_nodes=tuple(sorted(ids_a - ids_b)),
        b_only_nodes=tuple(sorted(ids_b - ids_a)),
        shared_nodes=tuple(sorted(ids_a & ids_b)),
        shared_edge_weights=shared_edges,
    )
