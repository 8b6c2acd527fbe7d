"""
Double Covers Branched along Smooth Curves
==========================================
Branch-data validation and the canonical resolution of a double cover X -> S
branched along a disjoint union of smooth curves B with B ~ -2K (numerically).

Features:
- CoverCase labels alpha, beta, gamma, delta(n), epsilon(s) with their target fiber types
- BranchData: a Config, its branch curves, named fibers and split annotations
- validate_branch: (2K + B).C = 0 for every tracked curve and (2K + B)^2 = 0
- pullback_fiber: the upstairs configuration of a prepared fiber
- canonical_resolution: full upstairs configuration, invariants and the K3 certificate
- Fixed-locus summary of the covering involution

Curves upstairs are named C(D) over a branch curve D, G(H) over a non-branch curve H,
and G'(H) for the second half of a split curve.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx

from k3calc.dualgraph import (
    Branch,
    Config,
    CurveNode,
    InvariantLedger,
    MarkedPoint,
    SigmaMark,
    kodaira_type,
)
from k3calc.fibration import fiber_data, prepare_fiber, trivial_lattice_rank
from utils.logger import CoverLogger

logger = logging.getLogger(__name__)
audit = CoverLogger(logger)

K3_EULER = 24


# ============================================================================
# Case Labels
# ============================================================================

class CaseLabel(str, Enum):
    ALPHA = 'alpha'
    BETA = 'beta'
    GAMMA = 'gamma'
    DELTA = 'delta'
    EPSILON = 'epsilon'


_GREEK = {'α': 'alpha', 'β': 'beta', 'γ': 'gamma', 'δ': 'delta', 'ε': 'epsilon'}
_CASE_PATTERN = re.compile(r'^\s*(\S+?)\s*(?:\(\s*(\d+)\s*\))?\s*$')
_SOURCE = {CaseLabel.ALPHA: 'II', CaseLabel.BETA: 'III', CaseLabel.GAMMA: 'IV'}
_TARGET = {CaseLabel.ALPHA: 'IV', CaseLabel.BETA: 'I0*', CaseLabel.GAMMA: 'IV*'}


@dataclass(frozen=True)
class CoverCase:
    """
    How a fiber meets the branch locus.

    alpha, beta, gamma: prepared II, III, IV fibers. delta(n): prepared I_n fiber.
    epsilon(s): I_s fiber disjoint from the branch locus whose preimage splits
    (s = 0 is a smooth fiber).
    """
    label: CaseLabel
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'label', CaseLabel(self.label))
        if self.label == CaseLabel.DELTA:
            if self.n is None or self.n < 1:
                raise ValueError(f"delta(n) needs n >= 1, got {self.n}")
        elif self.label == CaseLabel.EPSILON:
            if self.n is None or self.n < 0:
                raise ValueError(f"epsilon(s) needs s >= 0, got {self.n}")
        elif self.n is not None:
            raise ValueError(f"Case {self.label.value} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> 'CoverCase':
        """Parse 'alpha', 'delta(5)', 'epsilon(1)' (Greek letters accepted)."""
        match = _CASE_PATTERN.match(text)
        if match is None:
            raise ValueError(f"Cannot parse cover case: {text!r}")
        name, number = match.groups()
        name = _GREEK.get(name, name.lower())
        try:
            label = CaseLabel(name)
        except ValueError:
            raise ValueError(f"Unknown cover case: {text!r}") from None
        return cls(label, int(number) if number is not None else None)

    @property
    def source_kodaira(self) -> str:
        """Kodaira type of the fiber before preparation."""
        if self.label in _SOURCE:
            return _SOURCE[self.label]
        if self.label == CaseLabel.EPSILON and self.n == 0:
            return 'I0'
        return f"I{self.n}"

    @property
    def target_kodaira(self) -> str:
        """Kodaira type of the reduced preimage on the K3 surface."""
        if self.label in _TARGET:
            return _TARGET[self.label]
        if self.label == CaseLabel.EPSILON and self.n == 0:
            return 'smooth'
        return f"I{2 * self.n}"

    @property
    def is_multiple(self) -> bool:
        """epsilon fibers push forward to 2F."""
        return self.label == CaseLabel.EPSILON

    def __str__(self) -> str:
        return self.label.value if self.n is None else f"{self.label.value}({self.n})"


class Role(str, Enum):
    BRANCH = 'branch'
    NON_SPLIT = 'non_split'
    SPLIT = 'split'


# ============================================================================
# Branch Data and Validation
# ============================================================================

@dataclass(frozen=True)
class BranchData:
    """
    A configuration with its branch curves.

    fibers maps a fiber name to its component ids; annotations maps curves outside
    the branch locus and the fibers to 'split' or 'non_split'.
    """
    config: Config
    branch_ids: FrozenSet[str]
    fibers: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    annotations: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'branch_ids', frozenset(self.branch_ids))
        object.__setattr__(self, 'fibers', {name: tuple(ids) for name, ids in self.fibers.items()})
        annotations = dict(self.annotations)
        for curve_id, role in annotations.items():
            if role not in (Role.SPLIT.value, Role.NON_SPLIT.value):
                raise ValueError(f"Annotation of {curve_id} must be 'split' or 'non_split', got {role!r}")
        object.__setattr__(self, 'annotations', annotations)

    @classmethod
    def from_ids(cls, config: Config, branch_ids: Iterable[str],
                 fibers: Optional[Mapping[str, Iterable[str]]] = None,
                 annotations: Optional[Mapping[str, str]] = None) -> 'BranchData':
        """Mark is_branch on exactly the given curves and wrap the result."""
        ids = frozenset(branch_ids)
        curves = tuple(
            c if c.is_branch == (c.id in ids) else CurveNode(
                c.id, c.self_int, c.genus, c.mult, c.id in ids, c.sigma_mark, c.partner
            )
            for c in config.curves
        )
        return cls(
            config.with_changes(curves=curves),
            ids,
            {name: tuple(members) for name, members in (fibers or {}).items()},
            dict(annotations or {}),
        )

    def branch_curves(self) -> List[CurveNode]:
        return [c for c in self.config.curves if c.id in self.branch_ids]

    def branch_dot(self, curve_id: str) -> int:
        """B.C for a curve of the configuration."""
        return sum(self.config.intersection(b, curve_id) for b in self.branch_ids if self.config.has_curve(b))

    def branch_square(self) -> int:
        known = [b for b in self.branch_ids if self.config.has_curve(b)]
        return sum(self.config.intersection(a, b) for a in known for b in known)

    def k_dot_branch(self) -> int:
        return sum(c.k_dot for c in self.branch_curves())


@dataclass
class BranchReport:
    ok: bool
    violations: List[str]


def validate_branch(branch_data: BranchData) -> BranchReport:
    """
    Check the branch conditions on every tracked curve.

    Parameters
    ----------
    branch_data : BranchData
        Configuration and branch curve ids

    Returns
    -------
    BranchReport
        ok flag and one message per violated condition
    """
    config = branch_data.config
    violations = []

    for curve_id in sorted(branch_data.branch_ids):
        if not config.has_curve(curve_id):
            violations.append(f"unknown branch curve {curve_id}")
    known = sorted(b for b in branch_data.branch_ids if config.has_curve(b))

    for c in config.curves:
        if c.is_branch != (c.id in branch_data.branch_ids):
            violations.append(f"is_branch flag of {c.id} disagrees with the branch set")

    for curve_id in known:
        singular = any(e.is_self for e in config.edges_at(curve_id)) or any(
            p.is_singular_on(curve_id) for p in config.points_on(curve_id)
        )
        if singular:
            violations.append(f"branch curve {curve_id} is singular")
    for a, b in combinations(known, 2):
        if config.intersection(a, b):
            violations.append(f"branch curves {a} and {b} meet")

    for c in config.curves:
        value = 2 * c.k_dot + branch_data.branch_dot(c.id)
        if value:
            violations.append(f"(2K + B).{c.id} = {value}, expected 0")

    total = 4 * config.ledger.k_squared + 4 * branch_data.k_dot_branch() + branch_data.branch_square()
    if total:
        violations.append(f"(2K + B)^2 = {total}, expected 0")

    for violation in violations:
        audit.log_violation(violation)
    return BranchReport(not violations, violations)


# ============================================================================
# Pullback Engine
# ============================================================================

def _names(curve_id: str) -> Tuple[str, str]:
    return f"G({curve_id})", f"G'({curve_id})"


def _branch_name(curve_id: str) -> str:
    return f"C({curve_id})"


def _lift_point(point: MarkedPoint, roles: Mapping[str, Role], crossed: Set[str]) -> List[MarkedPoint]:
    branches = point.branches
    if len(branches) == 1 and branches[0].mult == 1:
        return []

    on_branch = [i for i, b in enumerate(branches) if roles[b.curve] is Role.BRANCH]
    if on_branch:
        if len(on_branch) > 1 or branches[on_branch[0]].mult > 1:
            raise ValueError(f"Point {point.id}: branch locus is not smooth here")
        d = on_branch[0]
        others = [i for i in range(len(branches)) if i != d]
        if len(others) > 1:
            raise ValueError(f"Point {point.id}: several curves meet the branch locus here; blow up first")
        h = others[0]
        curve_id = branches[h].curve
        c = point.contact(d, h)
        first, second = _names(curve_id)
        fixed = _branch_name(branches[d].curve)
        if c == 1 and roles[curve_id] is Role.NON_SPLIT:
            return [MarkedPoint(point.id, (Branch(fixed), Branch(first)), ((0, 1, 1),))]
        if c % 2:
            raise ValueError(
                f"Point {point.id}: {curve_id} meets the branch locus with odd contact {c} "
                f"and is pulled back as {roles[curve_id].value}"
            )
        # z^2 = x^c: two branches with contact c/2 to each other and to the fixed curve
        partner = second if roles[curve_id] is Role.SPLIT else first
        return [MarkedPoint.through(point.id, [fixed, first, partner], contact=c // 2)]

    split_indices = [i for i, b in enumerate(branches) if roles[b.curve] is Role.SPLIT]
    flipped = set(split_indices[1:]) if point.id in crossed else set()
    lifted = []
    for sheet, suffix in ((0, "'"), (1, "''")):
        upstairs = []
        for i, b in enumerate(branches):
            first, second = _names(b.curve)
            if roles[b.curve] is Role.SPLIT:
                name = (first, second)[sheet ^ (i in flipped)]
            else:
                name = first
            upstairs.append(Branch(name, b.mult))
        lifted.append(MarkedPoint(f"{point.id}{suffix}", tuple(upstairs), point.contacts))
    return lifted


def _pull_back(config: Config, roles: Mapping[str, Role], halve: Set[str],
               crossed: Set[str], ledger: InvariantLedger) -> Config:
    """
    Upstairs configuration of a double cover branched along the BRANCH curves.

    Parameters
    ----------
    config : Config
        Downstairs configuration
    roles : mapping
        Role of every curve
    halve : set
        Non-branch curves inside a fiber that meets the branch locus; their
        multiplicity is halved upstairs
    crossed : set
        Points off the branch locus where the two halves of split curves swap sheets
    ledger : InvariantLedger
        Ledger of the upstairs surface

    Returns
    -------
    Config
        Upstairs curves, points and edges with involution marks
    """
    missing = [c for c in config.curve_ids if c not in roles]
    if missing:
        raise ValueError(f"No pullback role for curves {missing}")
    config = config.materialized()

    points = []
    for point in config.points:
        points.extend(_lift_point(point, roles, crossed))
    edges = [e for p in points for e in p.edges()]

    branch_ids = [c.id for c in config.curves if roles[c.id] is Role.BRANCH]
    curves = []
    for c in config.curves:
        role = roles[c.id]
        if role is Role.BRANCH:
            if c.self_int % 2:
                raise ValueError(f"Branch curve {c.id} has odd self-intersection {c.self_int}")
            curves.append(CurveNode(_branch_name(c.id), c.self_int // 2, c.genus, c.mult,
                                    sigma_mark=SigmaMark.FIXED))
            continue

        mult = c.mult
        if c.id in halve:
            if mult % 2:
                raise ValueError(f"Curve {c.id} of odd multiplicity {mult} sits in a fiber meeting the branch locus")
            mult //= 2
        branch_dot = sum(config.intersection(b, c.id) for b in branch_ids)
        if branch_dot % 2:
            raise ValueError(f"Curve {c.id} meets the branch locus in odd degree {branch_dot}")

        first, second = _names(c.id)
        if role is Role.NON_SPLIT:
            genus = 2 * c.genus - 1 + branch_dot // 2
            if genus < 0:
                raise ValueError(f"Curve {c.id}: non-split pullback would have genus {genus}")
            curves.append(CurveNode(first, 2 * c.self_int, genus, mult, sigma_mark=SigmaMark.STABLE))
            continue

        # (G + G')^2 = 2 H^2 and K_X.G = (K + B/2).H
        meet = sum(e.local_mult for e in edges if not e.is_self and e.joins(first, second))
        square = c.self_int - meet
        twice_genus = square + c.k_dot + branch_dot // 2 + 2
        if twice_genus % 2 or twice_genus < 0:
            raise ValueError(f"Curve {c.id}: split pullback has inconsistent genus data")
        genus = twice_genus // 2
        curves.append(CurveNode(first, square, genus, mult, sigma_mark=SigmaMark.SWAPPED, partner=second))
        curves.append(CurveNode(second, square, genus, mult, sigma_mark=SigmaMark.SWAPPED, partner=first))

    return Config(tuple(curves), tuple(edges), tuple(points), ledger)


# ============================================================================
# Fibers
# ============================================================================

def _shape_node_match(first: Dict, second: Dict) -> bool:
    return all(first[k] == second[k] for k in ('self_int', 'genus', 'mult'))


def _shape_edge_match(first: Dict, second: Dict) -> bool:
    return sorted(d['local_mult'] for d in first.values()) == sorted(d['local_mult'] for d in second.values())


@lru_cache(maxsize=None)
def _reference_graph(label: str) -> nx.MultiGraph:
    return prepare_fiber(label)[0].graph()


def matches_case(fiber: Config, case: CoverCase) -> bool:
    """True iff the fiber has the prepared shape the case expects."""
    if case.label == CaseLabel.EPSILON:
        if any(c.mult != 1 for c in fiber.curves):
            return False
        expected = 'smooth' if case.n == 0 else f"I{case.n}"
        return kodaira_type(fiber) == expected
    return nx.is_isomorphic(fiber.graph(), _reference_graph(case.source_kodaira),
                            node_match=_shape_node_match, edge_match=_shape_edge_match)


def case_roles(fiber: Config, case: CoverCase) -> Dict[str, Role]:
    """
    Roles of the components of a fiber under the given case.

    (-4)-curves are branch curves in alpha through delta. The non-branch curve
    splits in alpha, the (-2)-curve splits in beta, nothing splits in gamma and
    delta, and every component splits in epsilon(s), s >= 1.
    """
    if not matches_case(fiber, case):
        raise ValueError(f"Fiber with curves {list(fiber.curve_ids)} does not have the shape of case {case}")

    if case.label == CaseLabel.EPSILON:
        role = Role.NON_SPLIT if case.n == 0 else Role.SPLIT
        return {c.id: role for c in fiber.curves}

    roles = {}
    for c in fiber.curves:
        if c.self_int == -4:
            roles[c.id] = Role.BRANCH
        elif case.label == CaseLabel.ALPHA:
            roles[c.id] = Role.SPLIT
        elif case.label == CaseLabel.BETA and c.self_int == -2:
            roles[c.id] = Role.SPLIT
        else:
            roles[c.id] = Role.NON_SPLIT
    return roles


def crossing_points(fiber: Config, case: CoverCase) -> Set[str]:
    """One point of the loop of an epsilon(s) fiber, s >= 1, where the halves swap sheets."""
    if case.label != CaseLabel.EPSILON or case.n == 0:
        return set()
    loop = [p.id for p in fiber.points if len(p.branches) >= 2]
    if not loop:
        raise ValueError(f"Fiber {list(fiber.curve_ids)} has no double point to cross")
    return {loop[-1]}


def pullback_fiber(fiber: Config, case: CoverCase) -> Config:
    """
    Upstairs configuration of a prepared fiber.

    Parameters
    ----------
    fiber : Config
        Prepared fiber (see fibration.prepare_fiber) or an I_s fiber for epsilon
    case : CoverCase
        How the fiber meets the branch locus

    Returns
    -------
    Config
        Configuration whose Kodaira type is case.target_kodaira

    Raises
    ------
    ValueError
        If the fiber does not have the shape of the case, or the result is
        not of the target type
    """
    fiber = fiber.materialized()
    roles = case_roles(fiber, case)
    halve = set() if case.is_multiple else {c for c, r in roles.items() if r is not Role.BRANCH}
    rho = trivial_lattice_rank(['I0' if case.target_kodaira == 'smooth' else case.target_kodaira])
    ledger = InvariantLedger(0, rho, K3_EULER, rational_surface=False)
    upstairs = _pull_back(fiber, roles, halve, crossing_points(fiber, case), ledger)

    found = kodaira_type(upstairs)
    if found != case.target_kodaira:
        raise ValueError(f"Pullback of case {case} has type {found}, expected {case.target_kodaira}")
    return upstairs


# ============================================================================
# Fixed Locus
# ============================================================================

@dataclass(frozen=True)
class FixedLocus:
    """Number of fixed curves and their genera."""
    m: int
    genera: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {'m': self.m, 'genera': list(self.genera)}


def fixed_locus_summary(upstairs: Config) -> FixedLocus:
    """
    Count the curves fixed by the covering involution.

    Raises
    ------
    ValueError
        If two fixed curves meet or a fixed curve is singular
    """
    fixed = [c for c in upstairs.curves if c.sigma_mark == SigmaMark.FIXED]
    for c in fixed:
        if any(e.is_self for e in upstairs.edges_at(c.id)):
            raise ValueError(f"Fixed curve {c.id} is singular")
    for a, b in combinations(fixed, 2):
        if upstairs.intersection(a.id, b.id):
            raise ValueError(f"Fixed curves {a.id} and {b.id} meet")
    return FixedLocus(len(fixed), tuple(sorted(c.genus for c in fixed)))


def check_fixed_point_rule(upstairs: Config) -> List[str]:
    """
    A stable, non-fixed smooth rational curve meets the fixed locus in exactly 2 points.

    Returns
    -------
    List[str]
        One message per curve breaking the rule
    """
    fixed = [c.id for c in upstairs.curves if c.sigma_mark == SigmaMark.FIXED]
    problems = []
    for c in upstairs.curves:
        if c.sigma_mark != SigmaMark.STABLE or c.genus != 0:
            continue
        if any(e.is_self for e in upstairs.edges_at(c.id)):
            continue
        total = sum(upstairs.intersection(c.id, f) for f in fixed)
        if total != 2:
            problems.append(f"stable rational curve {c.id} meets the fixed locus {total} times, expected 2")
    return problems


# ============================================================================
# Canonical Resolution
# ============================================================================

@dataclass
class CoverReport:
    """Outcome of a canonical resolution."""
    ok: bool
    violations: List[str]
    residuals: Dict[str, Fraction]
    k_plus_half_b_squared: Fraction
    euler_downstairs: int
    euler_branch: int
    euler_upstairs: int
    k_squared_upstairs: Fraction
    fixed_locus: Optional[FixedLocus] = None
    enriques_case: bool = False
    notes: List[str] = field(default_factory=list)
    k3: bool = False
    upstairs: Optional[Config] = None

    def to_dict(self) -> Dict:
        return {
            'ok': self.ok,
            'k3': self.k3,
            'enriques_case': self.enriques_case,
            'violations': list(self.violations),
            'residuals': {k: str(v) for k, v in sorted(self.residuals.items())},
            'k_plus_half_b_squared': str(self.k_plus_half_b_squared),
            'euler_downstairs': self.euler_downstairs,
            'euler_branch': self.euler_branch,
            'euler_upstairs': self.euler_upstairs,
            'k_squared_upstairs': str(self.k_squared_upstairs),
            'fixed_locus': self.fixed_locus.to_dict() if self.fixed_locus else None,
            'notes': list(self.notes),
        }


def k3_check(report: CoverReport) -> bool:
    """
    Numeric K3 certificate: every residual (K + B/2).C vanishes,
    (K + B/2)^2 = 0 and e(X) = 24.
    """
    if report.enriques_case:
        return False
    return (
        all(v == 0 for v in report.residuals.values())
        and report.k_plus_half_b_squared == 0
        and report.euler_upstairs == K3_EULER
    )


def _assign_roles(config: Config, branch_data: BranchData,
                  cases: Mapping[str, CoverCase]) -> Tuple[Dict[str, Role], Set[str], Set[str], List[str]]:
    roles: Dict[str, Role] = {}
    halve: Set[str] = set()
    crossed: Set[str] = set()
    notes = []

    for name, ids in branch_data.fibers.items():
        if name not in cases:
            raise ValueError(f"Missing cover case for fiber {name}")
        case = cases[name]
        if isinstance(case, str):
            case = CoverCase.parse(case)
        fiber = config.subconfig(ids)
        fiber_roles = case_roles(fiber, case)
        expected_branch = {c for c, r in fiber_roles.items() if r is Role.BRANCH}
        if expected_branch != set(ids) & branch_data.branch_ids:
            raise ValueError(
                f"Fiber {name}: branch curves {sorted(set(ids) & branch_data.branch_ids)} "
                f"do not match case {case} (expects {sorted(expected_branch)})"
            )
        for curve_id, role in fiber_roles.items():
            audit.log_split_decision(curve_id, role.value, f"fiber {name}, case {case}")
        roles.update(fiber_roles)
        if case.is_multiple:
            crossed |= crossing_points(fiber, case)
            notes.append(f"fiber {name}: case {case}, the upstairs fiber pushes forward to 2{name}")
        else:
            halve |= set(ids) - expected_branch

    for curve_id in config.curve_ids:
        if curve_id in roles:
            continue
        if curve_id in branch_data.branch_ids:
            roles[curve_id] = Role.BRANCH
        elif curve_id in branch_data.annotations:
            roles[curve_id] = Role(branch_data.annotations[curve_id])
            audit.log_split_decision(curve_id, roles[curve_id].value, 'annotation')
        else:
            raise ValueError(
                f"Curve {curve_id} is neither a branch curve nor in a fiber; annotate it split or non_split"
            )
    return roles, halve, crossed, notes


def canonical_resolution(branch_data: BranchData, cases: Optional[Mapping[str, CoverCase]] = None,
                         strict: bool = True) -> CoverReport:
    """
    Canonical resolution of the double cover branched along the branch curves.

    Parameters
    ----------
    branch_data : BranchData
        Configuration, branch curves, fibers and annotations
    cases : mapping, optional
        Fiber name -> CoverCase (or its text form) for every fiber of branch_data
    strict : bool
        Raise on invalid branch data instead of reporting it

    Returns
    -------
    CoverReport
        Violations, residuals, invariants, fixed locus and the K3 flag
    """
    config = branch_data.config
    ledger = config.ledger
    validation = validate_branch(branch_data)
    if strict and not validation.ok:
        raise ValueError(f"Invalid branch data: {validation.violations}")

    residuals = {
        c.id: c.k_dot + Fraction(branch_data.branch_dot(c.id), 2) for c in config.curves
    }
    k_plus_half = (
        ledger.k_squared + branch_data.k_dot_branch() + Fraction(branch_data.branch_square(), 4)
    )
    euler_branch = sum(2 - 2 * c.genus for c in branch_data.branch_curves())
    euler_upstairs = 2 * ledger.euler - euler_branch
    k_squared_upstairs = 2 * k_plus_half
    report = CoverReport(
        ok=validation.ok,
        violations=list(validation.violations),
        residuals=residuals,
        k_plus_half_b_squared=k_plus_half,
        euler_downstairs=ledger.euler,
        euler_branch=euler_branch,
        euler_upstairs=euler_upstairs,
        k_squared_upstairs=k_squared_upstairs,
    )

    if not branch_data.branch_ids:
        report.enriques_case = True
        report.notes.append("empty branch locus: unramified cover, Enriques case")
        if ledger.rational_surface:
            message = "empty branch locus on a rational surface: no connected unramified double cover exists"
            if strict:
                raise ValueError(message)
            report.ok = False
            report.violations.append(message)
            audit.log_violation(message)
        report.k3 = False
        audit.log_k3_check(euler_upstairs, False)
        return report

    try:
        roles, halve, crossed, notes = _assign_roles(config.materialized(), branch_data, cases or {})
        report.notes.extend(notes)
        if k_squared_upstairs.denominator != 1:
            raise ValueError(f"K_X^2 = {k_squared_upstairs} is not an integer")
        upstairs_ledger = InvariantLedger(int(k_squared_upstairs), ledger.rho, euler_upstairs,
                                          rational_surface=False)
        report.upstairs = _pull_back(config.materialized(), roles, halve, crossed, upstairs_ledger)
    except ValueError as e:
        if strict:
            raise
        report.ok = False
        report.violations.append(str(e))
        audit.log_violation(str(e))
        return report

    try:
        report.fixed_locus = fixed_locus_summary(report.upstairs)
    except ValueError as e:
        report.ok = False
        report.violations.append(str(e))
    report.notes.extend(f"fixed-point rule: {p}" for p in check_fixed_point_rule(report.upstairs))

    report.k3 = report.ok and k3_check(report)
    audit.log_k3_check(euler_upstairs, report.k3)
    return report


if __name__ == "__main__":
    for text in ('alpha', 'beta', 'gamma', 'delta(3)', 'epsilon(2)'):
        case = CoverCase.parse(text)
        if case.is_multiple:
            _, fiber = fiber_data(case.source_kodaira)
        else:
            fiber, _ = prepare_fiber(case.source_kodaira)
        upstairs = pullback_fiber(fiber, case)
        print(f"{case}: {len(upstairs.curves)} curves, type {kodaira_type(upstairs)}")
