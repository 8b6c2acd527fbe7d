"""
Birational Operations
=====================
Blow-ups, blow-downs and chain contractions of weighted dual graphs with
exact maintenance of the InvariantLedger.

Features:
- blow_up: one point at a time, with branch multiplicities and contact orders
  (infinitely near points are reached by iterating)
- blow_down: inverse rule for (-1)-curves, including cusp reconstruction
- contract_chain: blow down (-1)-curves inside a linear chain, then identify
  the resulting Du Val or cyclic quotient point
- Optional step traces (list of intermediate Configs)
"""

import logging
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx

from k3calc.cyclic_sing import BrieskornType, hj_contract
from k3calc.dualgraph import (
    Branch,
    Config,
    CurveNode,
    MarkedPoint,
    SingularPoint,
    fresh_id,
)
from utils.logger import BirationalLogger

logger = logging.getLogger(__name__)
audit = BirationalLogger(logger)


@dataclass(frozen=True)
class BlowUpRecord:
    """One blow-up step; the exceptional curve enters as a smooth rational (-1)-curve."""
    point_id: str
    new_curve_id: str
    multiplicity_assigned: int


@dataclass(frozen=True)
class BlowDownRecord:
    curve_id: str
    point_id: Optional[str]


@dataclass
class BirationalTrace:
    """Step-by-step record of birational operations."""
    steps: List[Tuple[Union[BlowUpRecord, BlowDownRecord], Config]] = field(default_factory=list)

    def record(self, step: Union[BlowUpRecord, BlowDownRecord], config: Config):
        self.steps.append((step, config))

    def __len__(self) -> int:
        return len(self.steps)


# ============================================================================
# Blow-up
# ============================================================================

def _contact_groups(point: MarkedPoint) -> List[List[int]]:
    """Branch indices grouped by the relation 'contact order >= 2'."""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(point.branches)))
    graph.add_edges_from((i, j) for i, j, order in point.contacts if order >= 2)
    groups = [sorted(component) for component in nx.connected_components(graph)]
    return sorted(groups, key=lambda g: g[0])


def blow_up(config: Config, point_id: str, exceptional_id: Optional[str] = None,
            total_transform: bool = True, trace: Optional[BirationalTrace] = None) -> Config:
    """
    Blow up one marked point.

    Parameters
    ----------
    config : Config
        Configuration carrying the point
    point_id : str
        Marked point to blow up
    exceptional_id : str, optional
        Id for the exceptional curve (default: fresh 'E<k>')
    total_transform : bool
        If True the exceptional curve gets multiplicity sum(branch mult * curve mult),
        so fiber classes stay numerically trivial; else 1
    trace : BirationalTrace, optional
        Receives the step

    Returns
    -------
    Config
        Blown-up configuration; ledger K^2 - 1, rho + 1, e + 1
    """
    point = config.point(point_id)
    for branch in point.branches:
        if branch.mult > 2:
            raise ValueError(
                f"Point {point_id}: branch of {branch.curve} with multiplicity {branch.mult} is not supported"
            )

    new_id = exceptional_id or config.fresh_curve_id('E')
    if config.has_curve(new_id):
        raise ValueError(f"Exceptional id {new_id} already names a curve")

    local = {c: point.local_multiplicity(c) for c in dict.fromkeys(point.curves)}
    if total_transform:
        multiplicity = sum(b.mult * config.curve(b.curve).mult for b in point.branches)
    else:
        multiplicity = 1

    curves = []
    for curve in config.curves:
        m = local.get(curve.id, 0)
        if m:
            genus = curve.genus - m * (m - 1) // 2
            if genus < 0:
                raise ValueError(f"Curve {curve.id}: genus {curve.genus} too small for multiplicity {m} at {point_id}")
            curve = replace(curve, self_int=curve.self_int - m * m, genus=genus)
        curves.append(curve)
    curves.append(CurveNode(new_id, -1, 0, multiplicity))

    edges = [e for e in config.edges if e.point != point_id]
    points = [p for p in config.points if p.id != point_id]
    taken = {p.id for p in points}

    for group in _contact_groups(point):
        for i, j in combinations(group, 2):
            if point.contact(i, j) < 2:
                raise ValueError(f"Point {point_id}: inconsistent contact orders among branches {group}")
        branches = [Branch(point.branches[i].curve, 1) for i in group] + [Branch(new_id, 1)]
        exceptional_index = len(group)
        contacts = [
            (x, y, point.contact(group[x], group[y]) - 1)
            for x, y in combinations(range(len(group)), 2)
        ]
        contacts += [(x, exceptional_index, point.branches[i].mult) for x, i in enumerate(group)]

        suffix = 1
        while f"{point_id}.{suffix}" in taken:
            suffix += 1
        new_point_id = f"{point_id}.{suffix}"
        taken.add(new_point_id)
        new_point = MarkedPoint(new_point_id, tuple(branches), tuple(contacts))
        points.append(new_point)
        edges.extend(new_point.edges())

    result = Config(tuple(curves), tuple(edges), tuple(points), config.ledger.blown_up(), config.singular_points)
    audit.log_blow_up(point_id, new_id, multiplicity, result.ledger.k_squared)
    if trace is not None:
        trace.record(BlowUpRecord(point_id, new_id, multiplicity), result)
    return result


def blow_up_points(config: Config, point_ids: Sequence[str], prefix: str = 'E',
                   total_transform: bool = True, trace: Optional[BirationalTrace] = None) -> Config:
    """Blow up several points in order, naming the exceptional curves prefix1, prefix2, ..."""
    for index, point_id in enumerate(point_ids, start=1):
        config = blow_up(config, point_id, f"{prefix}{index}", total_transform, trace)
    return config


# ============================================================================
# Blow-down
# ============================================================================

def blow_down(config: Config, curve_id: str, trace: Optional[BirationalTrace] = None) -> Config:
    """
    Contract a smooth rational (-1)-curve.

    Parameters
    ----------
    config : Config
        Configuration containing the curve
    curve_id : str
        The (-1)-curve to contract
    trace : BirationalTrace, optional
        Receives the step

    Returns
    -------
    Config
        Configuration with the curve removed; ledger K^2 + 1, rho - 1, e - 1
    """
    curve = config.curve(curve_id)
    if curve.self_int != -1 or curve.genus != 0:
        raise ValueError(
            f"Curve {curve_id} (self_int {curve.self_int}, genus {curve.genus}) is not a contractible (-1)-curve"
        )
    if any(e.is_self for e in config.edges_at(curve_id)):
        raise ValueError(f"Curve {curve_id} is singular and cannot be blown down")
    config = config.materialized(curve_id)
    on_curve = config.points_on(curve_id)

    merged: List[Branch] = []
    origin: List[int] = []
    inner_contacts = {}
    for group, point in enumerate(on_curve):
        if point.local_multiplicity(curve_id) != 1:
            raise ValueError(f"Curve {curve_id} is singular at {point.id} and cannot be blown down")
        exceptional_index = point.curves.index(curve_id)
        others = [i for i in range(len(point.branches)) if i != exceptional_index]
        positions = {}
        for i in others:
            contact_with_exceptional = point.contact(i, exceptional_index)
            if contact_with_exceptional == 1:
                mult = 1
            elif contact_with_exceptional == 2 and len(others) == 1:
                mult = 2
            else:
                raise ValueError(
                    f"Point {point.id}: contact data does not allow the inverse of a blow-up of {curve_id}"
                )
            positions[i] = len(merged)
            merged.append(Branch(point.branches[i].curve, mult))
            origin.append(group)
        for i, j in combinations(others, 2):
            inner_contacts[(positions[i], positions[j])] = point.contact(i, j) + 1

    if len(merged) > 1 and any(b.mult > 1 for b in merged):
        raise ValueError(f"Blowing down {curve_id} would put a cusp together with other branches; not supported")

    removed_points = {p.id for p in on_curve}
    edges = [
        e for e in config.edges
        if curve_id not in (e.a, e.b) and e.point not in removed_points
    ]
    points = [p for p in config.points if p.id not in removed_points]

    new_point_id = None
    if merged:
        new_point_id = fresh_id(f"{curve_id}.pt", {p.id for p in points})
        contacts = tuple(
            (x, y, inner_contacts.get((x, y), 1))
            for x, y in combinations(range(len(merged)), 2)
        )
        new_point = MarkedPoint(new_point_id, tuple(merged), contacts)
        points.append(new_point)
        edges.extend(new_point.edges())

    local = {}
    for branch in merged:
        local[branch.curve] = local.get(branch.curve, 0) + branch.mult
    curves = []
    for c in config.curves:
        if c.id == curve_id:
            continue
        m = local.get(c.id, 0)
        if m:
            c = replace(c, self_int=c.self_int + m * m, genus=c.genus + m * (m - 1) // 2)
        curves.append(c)

    result = Config(tuple(curves), tuple(edges), tuple(points), config.ledger.blown_down(), config.singular_points)
    audit.log_blow_down(curve_id, new_point_id, result.ledger.k_squared)
    if trace is not None:
        trace.record(BlowDownRecord(curve_id, new_point_id), result)
    return result


# ============================================================================
# Chain Contraction
# ============================================================================

@dataclass(frozen=True)
class ContractionResult:
    """Outcome of contract_chain."""
    config: Config
    singularity: Union[BrieskornType, str]
    weights: Tuple[int, ...]
    blow_downs: int
    contracted: int

    @property
    def label(self) -> str:
        return str(self.singularity)


def _check_linear_chain(config: Config, chain: Sequence[str]):
    if not chain:
        raise ValueError("contract_chain needs at least one curve")
    if len(set(chain)) != len(chain):
        raise ValueError(f"Chain repeats a curve: {list(chain)}")
    for curve_id in chain:
        if config.curve(curve_id).genus != 0:
            raise ValueError(f"Chain curve {curve_id} is not rational")
        if any(e.is_self for e in config.edges_at(curve_id)):
            raise ValueError(f"Chain curve {curve_id} is singular")
    for i, a in enumerate(chain):
        for j in range(i + 1, len(chain)):
            expected = 1 if j == i + 1 else 0
            found = config.intersection(a, chain[j])
            if found != expected:
                raise ValueError(
                    f"Chain not linear: {a}.{chain[j]} = {found}, expected {expected}"
                )


def contract_chain(config: Config, chain: Sequence[str], pick: str = 'leftmost',
                   trace: Optional[BirationalTrace] = None) -> ContractionResult:
    """
    Contract a linear chain of smooth rational curves to a point.

    Parameters
    ----------
    config : Config
        Configuration containing the chain; other curves may meet it
    chain : sequence of str
        Curve ids in chain order
    pick : str
        Which (-1)-curve to blow down first: 'leftmost' or 'rightmost'
    trace : BirationalTrace, optional
        Receives the blow-down steps

    Returns
    -------
    ContractionResult
        Configuration without the chain, singularity (BrieskornType, 'A<k>' or
        'smooth point'), remaining weights and counts
    """
    if pick not in ('leftmost', 'rightmost'):
        raise ValueError(f"Unknown pick order: {pick}")
    remaining = list(chain)
    _check_linear_chain(config, remaining)

    blow_downs = 0
    while True:
        candidates = [c for c in remaining if config.curve(c).self_int == -1]
        if not candidates:
            break
        target = candidates[0] if pick == 'leftmost' else candidates[-1]
        config = blow_down(config, target, trace=trace)
        remaining.remove(target)
        blow_downs += 1
        if remaining:
            _check_linear_chain(config, remaining)

    weights = tuple(-config.curve(c).self_int for c in remaining)
    if not remaining:
        singularity: Union[BrieskornType, str] = 'smooth point'
    elif any(w <= 1 for w in weights):
        raise ValueError(f"Chain weights {list(weights)} are not contractible")
    elif all(w == 2 for w in weights):
        singularity = f"A{len(weights)}"
    else:
        singularity = BrieskornType(*hj_contract(weights))

    keep = [c for c in config.curve_ids if c not in set(remaining)]
    contracted = config.subconfig(keep)
    if remaining:
        taken = {s.id for s in config.singular_points}
        record = SingularPoint(fresh_id(f"x{len(taken) + 1}", taken), str(singularity), len(remaining))
        contracted = replace(contracted, singular_points=config.singular_points + (record,))
    else:
        contracted = replace(contracted, singular_points=config.singular_points)

    audit.log_contraction(list(chain), list(weights), str(singularity))
    return ContractionResult(contracted, singularity, weights, blow_downs, len(remaining))


if __name__ == "__main__":
    from k3calc.cyclic_sing import index_two_chain_ids, index_two_resolution

    _, blown = index_two_resolution(10)
    result = contract_chain(blown, index_two_chain_ids(10))
    print(f"{len(blown.curves)} curves -> {result.label} after {result.blow_downs} blow-downs")
