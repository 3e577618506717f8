"""Instance file format (JSON) and DOT export.

Schema::

    {
      "nodes": ["v1", "v2", ...],
      "arcs": [{"from": "v1", "to": "v2", "weight": "1/2"}, ...],
      "targets": ["v2", ...],
      "budget": 3 | "infinite",
      "cost_bound": "27/1000"        (optional)
    }

Weights and the cost bound are strings, either decimal ("0.5") or a
quotient ("1/2"); both are read exactly (decimal text is converted to an
exact rational, never to a binary float). Serialization canonicalizes
rationals to reduced form and keeps node order, so parse(serialize(x))
reproduces x and serialize(parse(text)) is the canonical form of text.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InvalidInstanceError
from .graph import InfluenceGraph, Instance
from .rationals import as_rational, format_rational

_TOP_LEVEL_KEYS = {"nodes", "arcs", "targets", "budget", "cost_bound"}
_ARC_KEYS = {"from", "to", "weight"}


def parse_instance(data: bytes | str) -> Instance:
    """Parse an instance document, validating the schema exactly."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInstanceError("instance document must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise InvalidInstanceError(f"unknown instance fields: {sorted(unknown)}")
    for key in ("nodes", "arcs", "targets", "budget"):
        if key not in doc:
            raise InvalidInstanceError(f"missing instance field: {key!r}")

    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(x, str) for x in nodes):
        raise InvalidInstanceError('"nodes" must be a list of strings')

    raw_arcs = doc["arcs"]
    if not isinstance(raw_arcs, list):
        raise InvalidInstanceError('"arcs" must be a list')
    arcs: list[tuple[str, str, Fraction]] = []
    for entry in raw_arcs:
        if not isinstance(entry, dict) or set(entry) != _ARC_KEYS:
            raise InvalidInstanceError(
                'each arc must be an object with exactly "from", "to", "weight"'
            )
        if not isinstance(entry["from"], str) or not isinstance(entry["to"], str):
            raise InvalidInstanceError("arc endpoints must be node labels")
        if not isinstance(entry["weight"], str):
            raise InvalidInstanceError(
                "arc weight must be a string (decimal or p/q)"
            )
        arcs.append((entry["from"], entry["to"], as_rational(entry["weight"])))

    targets = doc["targets"]
    if not isinstance(targets, list) or not all(isinstance(x, str) for x in targets):
        raise InvalidInstanceError('"targets" must be a list of node labels')

    budget = doc["budget"]
    if budget == "infinite":
        parsed_budget: int | None = None
    elif isinstance(budget, int) and not isinstance(budget, bool):
        if budget < 0:
            raise InvalidInstanceError("budget is negative")
        parsed_budget = budget
    else:
        raise InvalidInstanceError('"budget" must be a non-negative integer or "infinite"')

    cost_bound: Fraction | None = None
    if "cost_bound" in doc:
        if not isinstance(doc["cost_bound"], str):
            raise InvalidInstanceError('"cost_bound" must be a rational string')
        cost_bound = as_rational(doc["cost_bound"])
        if cost_bound < 0:
            raise InvalidInstanceError("cost bound is negative")

    graph = InfluenceGraph(nodes, arcs)
    return Instance(
        graph=graph,
        targets=graph.node_set(targets),
        budget=parsed_budget,
        cost_bound=cost_bound,
    )


def serialize_instance(instance: Instance) -> bytes:
    """Canonical UTF-8 JSON serialization of an instance."""
    graph = instance.graph
    doc: dict[str, object] = {
        "nodes": list(graph.labels),
        "arcs": [
            {
                "from": graph.labels[arc.tail],
                "to": graph.labels[arc.head],
                "weight": format_rational(arc.weight),
            }
            for arc in graph.arcs
        ],
        "targets": graph.label_set(instance.targets),
        "budget": "infinite" if instance.budget is None else instance.budget,
    }
    if instance.cost_bound is not None:
        doc["cost_bound"] = format_rational(instance.cost_bound)
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def instance_to_dot(instance: Instance) -> str:
    """DOT rendering: targets filled, probabilistic arcs dashed."""
    graph = instance.graph
    lines = ["digraph influence {"]
    for v, label in enumerate(graph.labels):
        attrs = ' [style=filled, fillcolor=gray]' if v in instance.targets else ""
        lines.append(f'  "{label}"{attrs};')
    for arc in graph.arcs:
        attrs = f'label="{format_rational(arc.weight)}"'
        if arc.is_probabilistic:
            attrs += ", style=dashed"
        lines.append(
            f'  "{graph.labels[arc.tail]}" -> "{graph.labels[arc.head]}" [{attrs}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
