"""Discrete Bayesian network for soil-moisture context: Weather and
Irrigation priors feeding a SoilMoisture CPT, queried by exact enumeration
over the full joint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from farmgate.model import ActionId, FarmgateError

DISTRIBUTION_TOLERANCE = 1e-9

WEATHER = "Weather"
IRRIGATION = "Irrigation"
SOIL_MOISTURE = "SoilMoisture"


class BayesConfigError(FarmgateError, ValueError):
    """The network definition is malformed or a distribution does not sum to 1."""


class InconsistentEvidenceError(FarmgateError, ValueError):
    """The evidence assignment has probability zero under the network."""


@dataclass(frozen=True)
class BayesNet:
    """Two independent parents (Weather, Irrigation) and one child (SoilMoisture)."""

    nodes: Mapping[str, tuple[str, ...]]
    priors: Mapping[str, Mapping[str, float]]
    cpt: Mapping[tuple[str, str], Mapping[str, float]]
    evidence: Mapping[str, str] = None
    actions: Mapping[str, ActionId] = None

    def __post_init__(self) -> None:
        nodes = {name: tuple(states) for name, states in self.nodes.items()}
        for required in (WEATHER, IRRIGATION, SOIL_MOISTURE):
            if required not in nodes or not nodes[required]:
                raise BayesConfigError(f"network must define states for node {required!r}")
        for parent in (WEATHER, IRRIGATION):
            dist = self.priors.get(parent)
            if dist is None:
                raise BayesConfigError(f"missing prior for {parent!r}")
            _check_distribution(dist, nodes[parent], f"prior P({parent})")
        cpt = {}
        for weather in nodes[WEATHER]:
            for irrigation in nodes[IRRIGATION]:
                row = self.cpt.get((weather, irrigation))
                if row is None:
                    raise BayesConfigError(f"missing CPT row for ({weather}, {irrigation})")
                _check_distribution(
                    row, nodes[SOIL_MOISTURE], f"P({SOIL_MOISTURE} | {weather}, {irrigation})"
                )
                cpt[(weather, irrigation)] = MappingProxyType(dict(row))
        evidence = dict(self.evidence or {})
        for node, state in evidence.items():
            if node not in nodes:
                raise BayesConfigError(f"evidence names unknown node {node!r}")
            if state not in nodes[node]:
                raise BayesConfigError(f"evidence state {state!r} not in domain of {node!r}")
        actions = {str(k): ActionId(v) for k, v in (self.actions or {}).items()}
        for state in actions:
            if state not in nodes[SOIL_MOISTURE]:
                raise BayesConfigError(f"action mapping names unknown moisture state {state!r}")
        object.__setattr__(self, "nodes", MappingProxyType(nodes))
        object.__setattr__(
            self,
            "priors",
            MappingProxyType({k: MappingProxyType(dict(v)) for k, v in self.priors.items()}),
        )
        object.__setattr__(self, "cpt", MappingProxyType(cpt))
        object.__setattr__(self, "evidence", MappingProxyType(evidence))
        object.__setattr__(self, "actions", MappingProxyType(actions))


def _check_distribution(dist: Mapping[str, float], states: tuple[str, ...], label: str) -> None:
    if set(dist) != set(states):
        raise BayesConfigError(f"{label} must cover exactly the states {states}, got {sorted(dist)}")
    for state, p in dist.items():
        if not 0.0 <= p <= 1.0:
            raise BayesConfigError(f"{label}[{state}] must be in [0, 1], got {p}")
    total = sum(dist.values())
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise BayesConfigError(f"{label} sums to {total!r}, expected 1 within {DISTRIBUTION_TOLERANCE}")


def bn_query(
    net: BayesNet,
    query: str,
    evidence: Mapping[str, str] | None = None,
) -> dict[str, float]:
    """Posterior over ``query`` given ``evidence``, by full-joint enumeration.

    Raises ``ValueError`` for out-of-domain evidence and
    :class:`InconsistentEvidenceError` when the evidence has zero probability.
    """
    if query not in net.nodes:
        raise ValueError(f"unknown query node {query!r}")
    evidence = dict(evidence or {})
    for node, state in evidence.items():
        if node not in net.nodes:
            raise ValueError(f"unknown evidence node {node!r}")
        if state not in net.nodes[node]:
            raise ValueError(f"evidence state {state!r} not in domain of {node!r}")

    marginal = {state: 0.0 for state in net.nodes[query]}
    for weather in net.nodes[WEATHER]:
        if evidence.get(WEATHER, weather) != weather:
            continue
        for irrigation in net.nodes[IRRIGATION]:
            if evidence.get(IRRIGATION, irrigation) != irrigation:
                continue
            base = net.priors[WEATHER][weather] * net.priors[IRRIGATION][irrigation]
            for moisture in net.nodes[SOIL_MOISTURE]:
                if evidence.get(SOIL_MOISTURE, moisture) != moisture:
                    continue
                joint = base * net.cpt[(weather, irrigation)][moisture]
                assignment = {WEATHER: weather, IRRIGATION: irrigation, SOIL_MOISTURE: moisture}
                marginal[assignment[query]] += joint

    total = sum(marginal.values())
    if total <= 0.0:
        raise InconsistentEvidenceError(f"evidence {evidence} has zero probability")
    return {state: p / total for state, p in marginal.items()}


def bayes_from_dict(doc: dict) -> BayesNet:
    if not isinstance(doc, dict):
        raise BayesConfigError("bayes document must be an object")
    try:
        nodes = {str(k): tuple(str(s) for s in v) for k, v in doc["nodes"].items()}
        priors = {
            str(k): {str(s): float(p) for s, p in dist.items()}
            for k, dist in doc["priors"].items()
        }
        cpt = {}
        for key, row in doc["cpt"].items():
            parts = [p.strip() for p in str(key).split(",")]
            if len(parts) != 2:
                raise BayesConfigError(f"CPT key must be '<weather>,<irrigation>', got {key!r}")
            cpt[(parts[0], parts[1])] = {str(s): float(p) for s, p in row.items()}
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BayesConfigError):
            raise
        raise BayesConfigError(f"malformed bayes document: {exc}") from exc
    return BayesNet(
        nodes=nodes,
        priors=priors,
        cpt=cpt,
        evidence=doc.get("evidence") or {},
        actions=doc.get("actions") or {},
    )


def load_bayes(path: str | Path) -> BayesNet:
    with open(path, encoding="utf-8") as fh:
        return bayes_from_dict(json.load(fh))
