"""
Weighted Dual Graphs
====================
Core representation of curve configurations on a smooth projective surface.

Features:
- CurveNode / Edge / MarkedPoint / Config value types plus an InvariantLedger
- Marked points carry branch multiplicities and pairwise contact orders, so
  tangencies, nodes and cusps are explicit data
- Gram (intersection) matrix as a labeled pandas DataFrame
- Exact determinant and negative-definiteness through sympy
- Dynkin (ADE) and Kodaira fiber recognition through networkx

Genus on a CurveNode is the arithmetic genus; K.C follows by adjunction.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from itertools import combinations, groupby, permutations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd
import sympy

logger = logging.getLogger(__name__)


# ============================================================================
# Value Types
# ============================================================================

class SigmaMark(str, Enum):
    """Behaviour of a curve under the covering involution."""
    FIXED = 'fixed'
    STABLE = 'stable_not_fixed'
    SWAPPED = 'swapped'
    UNMARKED = 'unmarked'


@dataclass(frozen=True)
class CurveNode:
    """One irreducible curve of a configuration."""
    id: str
    self_int: int
    genus: int = 0
    mult: int = 1
    is_branch: bool = False
    sigma_mark: SigmaMark = SigmaMark.UNMARKED
    partner: Optional[str] = None

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"Curve {self.id}: negative genus {self.genus}")
        if self.mult < 1:
            raise ValueError(f"Curve {self.id}: multiplicity must be positive, got {self.mult}")
        if (self.sigma_mark == SigmaMark.SWAPPED) != (self.partner is not None):
            raise ValueError(f"Curve {self.id}: a swapped curve needs exactly one partner id")

    @property
    def k_dot(self) -> int:
        """K.C from adjunction, 2g - 2 - C^2."""
        return 2 * self.genus - 2 - self.self_int


@dataclass(frozen=True)
class Edge:
    """
    One intersection point of two curves (or a singular point of one curve).

    Endpoints are stored sorted; a == b encodes a node or cusp of that curve.
    """
    a: str
    b: str
    local_mult: int = 1
    point: Optional[str] = None

    def __post_init__(self):
        if self.local_mult < 1:
            raise ValueError(f"Edge {self.a}-{self.b}: local multiplicity must be positive")
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, 'a', a)
            object.__setattr__(self, 'b', b)

    @property
    def is_self(self) -> bool:
        return self.a == self.b

    def joins(self, first: str, second: str) -> bool:
        return {self.a, self.b} == {first, second} and (first != second or self.is_self)

    def other(self, curve_id: str) -> str:
        return self.b if curve_id == self.a else self.a


@dataclass(frozen=True)
class Branch:
    """A local branch of a curve through a marked point."""
    curve: str
    mult: int = 1

    def __post_init__(self):
        if self.mult < 1:
            raise ValueError(f"Branch of {self.curve}: multiplicity must be positive")


BranchSpec = Union[str, Branch, Tuple[str, int]]


def _as_branch(spec: BranchSpec) -> Branch:
    if isinstance(spec, Branch):
        return spec
    if isinstance(spec, str):
        return Branch(spec)
    curve, mult = spec
    return Branch(curve, mult)


@dataclass(frozen=True)
class MarkedPoint:
    """
    A point of the surface with the curve branches through it.

    contacts holds (i, j, order) for every pair of branch indices i < j.
    A branch of multiplicity >= 2 is a unibranch singular point (a cusp for 2)
    and must be alone at its point.
    """
    id: str
    branches: Tuple[Branch, ...]
    contacts: Tuple[Tuple[int, int, int], ...] = ()

    def __post_init__(self):
        branches = tuple(_as_branch(b) for b in self.branches)
        object.__setattr__(self, 'branches', branches)
        if not branches:
            raise ValueError(f"Point {self.id}: needs at least one branch")
        if len(branches) > 1 and any(b.mult > 1 for b in branches):
            raise ValueError(
                f"Point {self.id}: a singular branch must be the only branch at its point"
            )

        normalized = {}
        for i, j, order in self.contacts:
            if i == j:
                raise ValueError(f"Point {self.id}: contact of branch {i} with itself")
            if order < 1:
                raise ValueError(f"Point {self.id}: contact order must be >= 1, got {order}")
            key = (min(i, j), max(i, j))
            if key in normalized:
                raise ValueError(f"Point {self.id}: duplicate contact for branches {key}")
            normalized[key] = order

        expected = set(combinations(range(len(branches)), 2))
        if set(normalized) != expected:
            raise ValueError(f"Point {self.id}: contact orders must cover exactly the branch pairs {sorted(expected)}")
        object.__setattr__(self, 'contacts', tuple((i, j, normalized[(i, j)]) for i, j in sorted(normalized)))

    @classmethod
    def through(cls, point_id: str, branches: Sequence[BranchSpec], contact: int = 1) -> 'MarkedPoint':
        """Point where all branch pairs share the same contact order."""
        count = len(branches)
        contacts = tuple((i, j, contact) for i, j in combinations(range(count), 2))
        return cls(point_id, tuple(_as_branch(b) for b in branches), contacts)

    def contact(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        for a, b, order in self.contacts:
            if (a, b) == key:
                return order
        raise KeyError(f"Point {self.id}: no contact for branches {key}")

    def normalized(self) -> 'MarkedPoint':
        """
        Same point with branches sorted by (curve, mult).

        Branches that tie on (curve, mult) are ordered so that the contact
        table is lexicographically smallest, making the result independent
        of the order the branches were listed in.
        """
        def key(i: int) -> Tuple[str, int]:
            return self.branches[i].curve, self.branches[i].mult

        groups = [list(g) for _, g in groupby(sorted(range(len(self.branches)), key=key), key=key)]
        best = None
        for choice in product(*(permutations(g) for g in groups)):
            order = [i for group in choice for i in group]
            position = {old: new for new, old in enumerate(order)}
            contacts = tuple(sorted(
                (min(position[i], position[j]), max(position[i], position[j]), c) for i, j, c in self.contacts
            ))
            if best is None or contacts < best[1]:
                best = (order, contacts)
        order, contacts = best
        return MarkedPoint(self.id, tuple(self.branches[i] for i in order), contacts)

    @property
    def curves(self) -> Tuple[str, ...]:
        return tuple(b.curve for b in self.branches)

    def local_multiplicity(self, curve_id: str) -> int:
        """Multiplicity of the curve at this point (sum over its branches)."""
        return sum(b.mult for b in self.branches if b.curve == curve_id)

    def is_singular_on(self, curve_id: str) -> bool:
        return self.local_multiplicity(curve_id) >= 2

    def edges(self) -> Tuple[Edge, ...]:
        """Intersection edges implied by the branch and contact table."""
        if len(self.branches) == 1:
            branch = self.branches[0]
            if branch.mult == 1:
                return ()
            delta = branch.mult * (branch.mult - 1) // 2
            return (Edge(branch.curve, branch.curve, delta, self.id),)
        return tuple(
            Edge(self.branches[i].curve, self.branches[j].curve, order, self.id)
            for i, j, order in self.contacts
        )


@dataclass(frozen=True)
class InvariantLedger:
    """Exact scalars of the ambient surface."""
    k_squared: int
    rho: int
    euler: int
    rational_surface: bool = True

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError(f"Picard number must be positive, got {self.rho}")
        if self.rational_surface:
            if self.rho != 10 - self.k_squared or self.euler != 12 - self.k_squared:
                raise ValueError(
                    f"Rational surface ledger inconsistent: K^2={self.k_squared}, "
                    f"rho={self.rho}, e={self.euler}"
                )

    @classmethod
    def rational(cls, k_squared: int) -> 'InvariantLedger':
        return cls(k_squared, 10 - k_squared, 12 - k_squared, True)

    def blown_up(self, count: int = 1) -> 'InvariantLedger':
        return replace(self, k_squared=self.k_squared - count, rho=self.rho + count, euler=self.euler + count)

    def blown_down(self, count: int = 1) -> 'InvariantLedger':
        return replace(self, k_squared=self.k_squared + count, rho=self.rho - count, euler=self.euler - count)


@dataclass(frozen=True)
class SingularPoint:
    """A point produced by contracting a chain; contracted counts removed classes."""
    id: str
    label: str
    contracted: int


@dataclass(frozen=True)
class Config:
    """
    Weighted dual graph of curves with marked points and an InvariantLedger.
    """
    curves: Tuple[CurveNode, ...]
    edges: Tuple[Edge, ...]
    points: Tuple[MarkedPoint, ...]
    ledger: InvariantLedger
    singular_points: Tuple[SingularPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'curves', tuple(self.curves))
        object.__setattr__(self, 'edges', tuple(self.edges))
        object.__setattr__(self, 'points', tuple(self.points))
        object.__setattr__(self, 'singular_points', tuple(self.singular_points))

        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate curve ids in configuration: {ids}")
        point_ids = [p.id for p in self.points]
        if len(set(point_ids)) != len(point_ids):
            raise ValueError(f"Duplicate point ids in configuration: {point_ids}")

        known = set(ids)
        points = {p.id: p for p in self.points}
        for p in self.points:
            missing = [c for c in p.curves if c not in known]
            if missing:
                raise ValueError(f"Point {p.id} references unknown curves {missing}")
        for e in self.edges:
            if e.a not in known or e.b not in known:
                raise ValueError(f"Edge {e.a}-{e.b} references an unknown curve")
            if e.point is None:
                continue
            if e.point not in points:
                raise ValueError(f"Edge {e.a}-{e.b} references unknown point {e.point}")
            through = points[e.point].curves
            if e.is_self:
                if points[e.point].local_multiplicity(e.a) < 2:
                    raise ValueError(f"Self-edge of {e.a} at {e.point} needs a singular branch there")
            elif e.a not in through or e.b not in through:
                raise ValueError(f"Edge {e.a}-{e.b} at {e.point}: point does not carry both curves")

    # ------------------------------------------------------------------
    # Lookup
    # ------------------------------------------------------------------

    @cached_property
    def _curve_index(self) -> Dict[str, CurveNode]:
        return {c.id: c for c in self.curves}

    @cached_property
    def _point_index(self) -> Dict[str, MarkedPoint]:
        return {p.id: p for p in self.points}

    @property
    def curve_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.curves)

    def has_curve(self, curve_id: str) -> bool:
        return curve_id in self._curve_index

    def curve(self, curve_id: str) -> CurveNode:
        try:
            return self._curve_index[curve_id]
        except KeyError:
            raise ValueError(f"Unknown curve: {curve_id}") from None

    def has_point(self, point_id: str) -> bool:
        return point_id in self._point_index

    def point(self, point_id: str) -> MarkedPoint:
        try:
            return self._point_index[point_id]
        except KeyError:
            raise ValueError(f"Unknown point: {point_id}") from None

    def intersection(self, a: str, b: str) -> int:
        """Intersection number C_a . C_b (self-intersection when a == b)."""
        if a == b:
            return self.curve(a).self_int
        return sum(e.local_mult for e in self.edges if not e.is_self and e.joins(a, b))

    def edges_at(self, curve_id: str) -> List[Edge]:
        return [e for e in self.edges if curve_id in (e.a, e.b)]

    def neighbors(self, curve_id: str) -> List[str]:
        found = {e.other(curve_id) for e in self.edges_at(curve_id) if not e.is_self}
        return [c for c in self.curve_ids if c in found]

    def points_on(self, curve_id: str) -> List[MarkedPoint]:
        return [p for p in self.points if curve_id in p.curves]

    def fresh_curve_id(self, prefix: str) -> str:
        return fresh_id(prefix, set(self.curve_ids))

    def fresh_point_id(self, prefix: str) -> str:
        return fresh_id(prefix, set(self._point_index))

    @property
    def rho_singular(self) -> int:
        """Picard number after the recorded contractions."""
        return self.ledger.rho - sum(s.contracted for s in self.singular_points)

    # ------------------------------------------------------------------
    # Derived configurations
    # ------------------------------------------------------------------

    def with_changes(self, **changes) -> 'Config':
        return replace(self, **changes)

    def replace_curve(self, curve_id: str, **changes) -> 'Config':
        curves = tuple(replace(c, **changes) if c.id == curve_id else c for c in self.curves)
        return replace(self, curves=curves)

    def materialized(self, curve_id: Optional[str] = None) -> 'Config':
        """Give every point-less edge (optionally only those at curve_id) its own marked point."""
        def selected(e: Edge) -> bool:
            return e.point is None and (curve_id is None or curve_id in (e.a, e.b))

        loose = [e for e in self.edges if selected(e)]
        if not loose:
            return self
        edges = [e for e in self.edges if not selected(e)]
        points = list(self.points)
        taken = {p.id for p in points}
        for edge in loose:
            point_id = fresh_id(f"{edge.a}^{edge.b}", taken)
            taken.add(point_id)
            if edge.is_self:
                # node with the recorded contact order
                point = MarkedPoint(point_id, (Branch(edge.a), Branch(edge.a)), ((0, 1, edge.local_mult),))
            else:
                point = MarkedPoint(point_id, (Branch(edge.a), Branch(edge.b)), ((0, 1, edge.local_mult),))
            points.append(point)
            edges.extend(point.edges())
        return replace(self, edges=tuple(edges), points=tuple(points))

    def subconfig(self, ids: Iterable[str]) -> 'Config':
        """Restriction to the given curves; points keep only their branches on them."""
        keep = list(ids)
        for curve_id in keep:
            self.curve(curve_id)
        keep_set = set(keep)
        curves = tuple(c for c in self.curves if c.id in keep_set)
        edges = tuple(e for e in self.edges if e.a in keep_set and e.b in keep_set)
        points = []
        for p in self.points:
            restricted = _restrict_point(p, keep_set)
            if restricted is not None:
                points.append(restricted)
        used = {e.point for e in edges if e.point is not None}
        points = [p for p in points if len(p.branches) > 1 or p.branches[0].mult > 1 or p.id in used]
        return Config(curves, edges, tuple(points), self.ledger)

    def graph(self) -> nx.MultiGraph:
        """Multigraph with node attributes self_int/genus/mult and edge attribute local_mult."""
        graph = nx.MultiGraph()
        for c in self.curves:
            graph.add_node(c.id, self_int=c.self_int, genus=c.genus, mult=c.mult, is_branch=c.is_branch)
        for e in self.edges:
            graph.add_edge(e.a, e.b, local_mult=e.local_mult, point=e.point)
        return graph

    def incidence_graph(self) -> nx.Graph:
        """
        Curves, marked points, branches and edges as one labeled graph.

        Each branch node hangs between its curve and its point; branch pairs
        carry their contact order. Each edge node links its curves and its
        point. Loose edges are materialized first.
        """
        config = self.materialized()
        graph = nx.Graph()
        for c in config.curves:
            graph.add_node(('curve', c.id), label=('curve', c.self_int, c.genus, c.mult, c.is_branch))
        for p in config.points:
            graph.add_node(('point', p.id), label=('point',))
            for i, b in enumerate(p.branches):
                node = ('branch', p.id, i)
                graph.add_node(node, label=('branch', b.mult))
                graph.add_edge(node, ('curve', b.curve), order=0)
                graph.add_edge(node, ('point', p.id), order=0)
            for i, j, order in p.contacts:
                graph.add_edge(('branch', p.id, i), ('branch', p.id, j), order=order)
        for k, e in enumerate(config.edges):
            node = ('edge', k)
            graph.add_node(node, label=('edge', e.local_mult, e.is_self))
            graph.add_edge(node, ('curve', e.a), order=0)
            graph.add_edge(node, ('curve', e.b), order=0)
            graph.add_edge(node, ('point', e.point), order=0)
        return graph

    def signature(self) -> Tuple:
        """Relabeling-invariant summary: ledger plus curve, edge and point data multisets."""
        config = self.materialized()
        curve_data = {c.id: (c.self_int, c.genus, c.mult, c.is_branch) for c in config.curves}
        edge_data = sorted(
            tuple(sorted((curve_data[e.a], curve_data[e.b]))) + (e.local_mult, e.is_self)
            for e in config.edges
        )
        point_data = sorted(
            (
                tuple(sorted(curve_data[b.curve] + (b.mult,) for b in p.branches)),
                tuple(sorted(order for _, _, order in p.contacts)),
            )
            for p in config.points
        )
        return (config.ledger, tuple(sorted(curve_data.values())), tuple(edge_data), tuple(point_data))

    def same_shape(self, other: 'Config') -> bool:
        """True iff the two configurations agree up to renaming curves and points."""
        if self.ledger != other.ledger:
            return False
        return nx.is_isomorphic(
            self.incidence_graph(), other.incidence_graph(),
            node_match=_label_match, edge_match=_order_match,
        )


def fresh_id(prefix: str, taken: set) -> str:
    if prefix not in taken:
        return prefix
    index = 1
    while f"{prefix}{index}" in taken:
        index += 1
    return f"{prefix}{index}"


def _restrict_point(point: MarkedPoint, keep: set) -> Optional[MarkedPoint]:
    kept = [i for i, b in enumerate(point.branches) if b.curve in keep]
    if not kept:
        return None
    remap = {old: new for new, old in enumerate(kept)}
    contacts = tuple(
        (remap[i], remap[j], order) for i, j, order in point.contacts if i in remap and j in remap
    )
    return MarkedPoint(point.id, tuple(point.branches[i] for i in kept), contacts)


def _label_match(first: Dict, second: Dict) -> bool:
    return first['label'] == second['label']


def _order_match(first: Dict, second: Dict) -> bool:
    return first['order'] == second['order']


# ============================================================================
# Builder
# ============================================================================

class ConfigBuilder:
    """
    Incremental construction of a Config.

    Adding a marked point also adds the edges its contact table implies.
    """

    def __init__(self, ledger: InvariantLedger, base: Optional[Config] = None):
        self.ledger = ledger
        self._curves: Dict[str, CurveNode] = {}
        self._edges: List[Edge] = []
        self._points: Dict[str, MarkedPoint] = {}
        self._singular: List[SingularPoint] = []
        if base is not None:
            self._curves = {c.id: c for c in base.curves}
            self._edges = list(base.edges)
            self._points = {p.id: p for p in base.points}
            self._singular = list(base.singular_points)

    @classmethod
    def from_config(cls, config: Config) -> 'ConfigBuilder':
        return cls(config.ledger, base=config)

    def add_curve(self, curve_id: str, self_int: int, genus: int = 0, mult: int = 1,
                  is_branch: bool = False) -> 'ConfigBuilder':
        if curve_id in self._curves:
            raise ValueError(f"Curve {curve_id} already present")
        self._curves[curve_id] = CurveNode(curve_id, self_int, genus, mult, is_branch)
        return self

    def add_point(self, point_id: Optional[str], branches: Sequence[BranchSpec],
                  contacts: Optional[Dict[Tuple[int, int], int]] = None,
                  default_contact: int = 1) -> str:
        """Add a marked point and its implied edges; returns the point id."""
        if point_id is None:
            index = len(self._points) + 1
            while f"p{index}" in self._points:
                index += 1
            point_id = f"p{index}"
        if point_id in self._points:
            raise ValueError(f"Point {point_id} already present")
        parsed = tuple(_as_branch(b) for b in branches)
        for branch in parsed:
            if branch.curve not in self._curves:
                raise ValueError(f"Point {point_id}: unknown curve {branch.curve}")
        table = dict(contacts or {})
        entries = tuple(
            (i, j, table.get((i, j), table.get((j, i), default_contact)))
            for i, j in combinations(range(len(parsed)), 2)
        )
        point = MarkedPoint(point_id, parsed, entries)
        self._points[point_id] = point
        self._edges.extend(point.edges())
        return point_id

    def meet(self, a: str, b: str, point_id: Optional[str] = None, contact: int = 1) -> str:
        """Two curves meeting at one point with the given contact order."""
        return self.add_point(point_id, [a, b], {(0, 1): contact})

    def add_edge(self, a: str, b: str, local_mult: int = 1) -> 'ConfigBuilder':
        for curve_id in (a, b):
            if curve_id not in self._curves:
                raise ValueError(f"Edge {a}-{b}: unknown curve {curve_id}")
        self._edges.append(Edge(a, b, local_mult))
        return self

    def build(self) -> Config:
        return Config(
            tuple(self._curves.values()), tuple(self._edges),
            tuple(self._points.values()), self.ledger, tuple(self._singular),
        )


# ============================================================================
# Gram Matrix Arithmetic
# ============================================================================

def intersection_matrix(config: Config) -> pd.DataFrame:
    """
    Gram matrix of the configuration.

    Parameters
    ----------
    config : Config
        Configuration of curves

    Returns
    -------
    pd.DataFrame
        Symmetric integer matrix indexed by curve ids on both axes
    """
    ids = list(config.curve_ids)
    gram = pd.DataFrame(np.zeros((len(ids), len(ids)), dtype=np.int64), index=ids, columns=ids)
    for curve in config.curves:
        gram.at[curve.id, curve.id] = curve.self_int
    for edge in config.edges:
        if edge.is_self:
            continue
        gram.at[edge.a, edge.b] += edge.local_mult
        gram.at[edge.b, edge.a] += edge.local_mult
    return gram


def as_exact_matrix(matrix) -> sympy.Matrix:
    values = np.asarray(matrix, dtype=object)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {values.shape}")
    return sympy.Matrix([[int(x) for x in row] for row in values])


def is_negative_definite(matrix) -> bool:
    """
    Exact negative-definiteness test.

    Parameters
    ----------
    matrix : array-like or pd.DataFrame
        Symmetric integer matrix

    Returns
    -------
    bool
        True iff the leading principal minors alternate in sign starting negative
    """
    gram = as_exact_matrix(matrix)
    if not gram.is_symmetric():
        raise ValueError("Negative-definiteness is only defined here for symmetric matrices")
    if gram.rows == 0:
        return True
    return bool((-gram).is_positive_definite)


def gram_determinant(matrix) -> int:
    """Exact determinant of a square integer matrix."""
    gram = as_exact_matrix(matrix)
    if gram.rows == 0:
        return 1
    return int(gram.det(method='bareiss'))


def discriminant(matrix) -> int:
    """Absolute value of the Gram determinant."""
    return abs(gram_determinant(matrix))


def fiber_class_trivial(config: Config) -> bool:
    """
    True iff F = sum mult_i C_i satisfies F.C = 0 for every component and F^2 = 0.
    """
    gram = intersection_matrix(config).to_numpy()
    mults = np.array([c.mult for c in config.curves], dtype=np.int64)
    products = gram @ mults
    return bool(np.all(products == 0)) and int(mults @ products) == 0


# ============================================================================
# Shape Recognition
# ============================================================================

def _simple_tree(config: Config) -> Optional[nx.Graph]:
    """Simple graph of a configuration whose edges are transversal and form a tree."""
    if any(e.is_self or e.local_mult != 1 for e in config.edges):
        return None
    multi = config.graph()
    simple = nx.Graph(multi)
    if multi.number_of_edges() != simple.number_of_edges() or not nx.is_tree(simple):
        return None
    return simple


def _arm_lengths(tree: nx.Graph, center: str) -> List[int]:
    rest = tree.subgraph([v for v in tree.nodes if v != center])
    return sorted(len(component) for component in nx.connected_components(rest))


def dynkin_type(config: Config) -> Optional[str]:
    """
    Recognize an ADE configuration of smooth rational (-2)-curves.

    Parameters
    ----------
    config : Config
        Connected configuration

    Returns
    -------
    str or None
        'A<m>', 'D<m>' or 'E<m>'; None if the configuration is not ADE
    """
    if not config.curves:
        raise ValueError("dynkin_type needs a non-empty configuration")
    if not nx.is_connected(config.graph()):
        raise ValueError("dynkin_type needs a connected configuration")

    if any(c.self_int != -2 or c.genus != 0 for c in config.curves):
        return None
    tree = _simple_tree(config)
    if tree is None:
        return None

    size = tree.number_of_nodes()
    degrees = dict(tree.degree())
    if max(degrees.values(), default=0) <= 2:
        return f"A{size}"

    centers = [v for v, d in degrees.items() if d >= 3]
    if len(centers) != 1 or degrees[centers[0]] != 3:
        return None
    arms = _arm_lengths(tree, centers[0])
    if arms[0] == 1 and arms[1] == 1:
        return f"D{size}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{size}"
    return None


def _singularity_on_single_curve(config: Config, curve_id: str) -> Optional[str]:
    singular = [p for p in config.points_on(curve_id) if p.is_singular_on(curve_id)]
    if not singular:
        return 'smooth'
    if len(singular) > 1:
        return None
    point = singular[0]
    if len(point.branches) == 2 and point.contacts[0][2] == 1:
        return 'I1'
    if len(point.branches) == 1 and point.branches[0].mult == 2:
        return 'II'
    return None


def kodaira_type(config: Config) -> Optional[str]:
    """
    Recognize a Kodaira fiber type from the dual graph, multiplicities and contacts.

    Parameters
    ----------
    config : Config
        Connected configuration of fiber components with multiplicities

    Returns
    -------
    str or None
        'smooth', 'I<n>', 'I<n>*', 'II', 'III', 'IV', 'II*', 'III*', 'IV*' or None
    """
    if not config.curves or not nx.is_connected(config.graph()):
        return None
    config = config.materialized()

    if len(config.curves) == 1:
        curve = config.curves[0]
        if curve.self_int != 0 or curve.genus != 1:
            return None
        return _singularity_on_single_curve(config, curve.id)

    if any(c.self_int != -2 or c.genus != 0 for c in config.curves):
        return None
    if any(e.is_self for e in config.edges) or not fiber_class_trivial(config):
        return None

    size = len(config.curves)
    if size == 2:
        local = sorted(e.local_mult for e in config.edges)
        if local == [2]:
            return 'III'
        if local == [1, 1]:
            return 'I2'
        return None

    if any(e.local_mult != 1 for e in config.edges):
        return None

    if size == 3 and any(len(p.branches) == 3 for p in config.points):
        return 'IV'

    multi = config.graph()
    simple = nx.Graph(multi)
    if multi.number_of_edges() != simple.number_of_edges():
        return None
    degrees = dict(simple.degree())

    if all(d == 2 for d in degrees.values()) and nx.is_connected(simple):
        return f"I{size}"

    if not nx.is_tree(simple):
        return None
    high = sorted(d for d in degrees.values() if d >= 3)
    if high == [4] and size == 5:
        return 'I0*'
    if high == [3, 3]:
        return f"I{size - 5}*"
    if high == [3]:
        center = next(v for v, d in degrees.items() if d == 3)
        arms = tuple(_arm_lengths(simple, center))
        return {(2, 2, 2): 'IV*', (1, 3, 3): 'III*', (1, 2, 5): 'II*'}.get(arms)
    return None


if __name__ == "__main__":
    ledger = InvariantLedger.rational(0)
    builder = ConfigBuilder(ledger)
    for j in range(1, 4):
        builder.add_curve(f"C{j}", -2)
    builder.meet('C1', 'C2')
    builder.meet('C2', 'C3')
    builder.meet('C3', 'C1')
    cycle = builder.build()
    print(intersection_matrix(cycle))
    print(f"kodaira_type: {kodaira_type(cycle)}")
    print(f"negative definite: {is_negative_definite(intersection_matrix(cycle))}")
