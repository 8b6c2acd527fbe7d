"""
Scenario Registry
=================
Named, deterministic reproductions of the curve constructions: each scenario
builds a configuration, runs the double cover and contractions, and compares
the resulting invariants exactly against declared expectations.

Features:
- Scenario / Expectation / Provenance registry built from the scenarios: config section
- run_scenario with optional mutation ('drop_blow_up', 'move_branch')
- verify_all: pandas summary of every scenario
- registry_coverage: fixed-curve counts m declared across the registry
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from k3calc.birational import BirationalTrace, blow_down, blow_up, contract_chain
from k3calc.cyclic_sing import (
    chain_config,
    discrepancies,
    index_two_chain_ids,
    index_two_resolution,
)
from k3calc.double_cover import (
    BranchData,
    CoverCase,
    CoverReport,
    canonical_resolution,
    matches_case,
    pullback_fiber,
    validate_branch,
)
from k3calc.dualgraph import Config, ConfigBuilder, InvariantLedger, dynkin_type, kodaira_type
from k3calc.fibration import (
    REALIZABLE_CONFIGURATIONS,
    EllipticFibration,
    dim_anti_bicanonical,
    enumerate_pairs,
    fiber_data,
    i_index,
    normalize_type,
    prepare_fiber,
    trivial_lattice_rank,
)
from utils.helpers import config_section

logger = logging.getLogger(__name__)

BASE_LEDGER = InvariantLedger.rational(0)
ENRIQUES_LEDGER = InvariantLedger(0, 10, 12, rational_surface=False)

DEFAULT_PARAMETERS = {
    'example2_8_pairs': [[1, 9], [2, 8], [5, 5]],
    'example2_8_fiber_pairs': [['II', 'I9'], ['III', 'I8']],
    'lemma5_1_s': [0, 1, 2, 3],
    'lemma6_1_types': ['II', 'III', 'IV', 'I1', 'I2', 'I9'],
    'lemma2_4b_cases': [[1, 1], [4, 2], [9, 0]],
    'lemma3_2_n': [1, 2, 5, 9],
}


# ============================================================================
# Registry Types
# ============================================================================

class Provenance(str, Enum):
    STATED = 'stated'
    DERIVED = 'derived'
    TRIVIAL = 'trivial'


@dataclass(frozen=True)
class Expectation:
    name: str
    expected: Any
    provenance: Provenance = Provenance.DERIVED


Probe = Callable[[Config], Any]


@dataclass
class ScenarioPlan:
    """
    What a scenario builder produces.

    branch carries the downstairs configuration; contractions are chains contracted
    in order after the cover is computed; probes run on the downstairs and upstairs
    configurations; extra holds values the builder computed itself.
    """
    branch: BranchData
    cases: Dict[str, str] = field(default_factory=dict)
    cover: bool = True
    contractions: List[Tuple[str, ...]] = field(default_factory=list)
    downstairs_probes: Dict[str, Probe] = field(default_factory=dict)
    upstairs_probes: Dict[str, Probe] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    builder: Callable[[Optional[BirationalTrace]], ScenarioPlan]
    expected: Tuple[Expectation, ...]
    mutations: Tuple[str, ...] = ('drop_blow_up',)

    def expectation(self, name: str) -> Optional[Expectation]:
        return next((e for e in self.expected if e.name == name), None)


@dataclass
class ExpectationResult:
    name: str
    expected: Any
    actual: Any
    provenance: Provenance
    passed: bool


@dataclass
class ScenarioReport:
    """Outcome of one scenario run."""
    name: str
    mutation: Optional[str]
    results: List[ExpectationResult]
    artifacts: Dict[str, Config] = field(default_factory=dict)
    cover: Optional[CoverReport] = None
    notes: List[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.results)

    @property
    def failures(self) -> List[ExpectationResult]:
        return [r for r in self.results if not r.passed]

    def value(self, name: str) -> Any:
        found = next((r for r in self.results if r.name == name), None)
        return found.actual if found else None

    def to_dict(self) -> Dict:
        return {
            'scenario': self.name,
            'mutation': self.mutation,
            'passed': self.passed,
            'error': self.error,
            'expectations': [
                {
                    'name': r.name,
                    'expected': _jsonable(r.expected),
                    'actual': _jsonable(r.actual),
                    'provenance': r.provenance.value,
                    'passed': r.passed,
                }
                for r in self.results
            ],
            'cover': self.cover.to_dict() if self.cover else None,
            'notes': list(self.notes),
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


# ============================================================================
# Construction Helpers
# ============================================================================

def _tag_points(config: Config, tag: str) -> Config:
    """Prefix every point id so that independently built pieces can be joined."""
    rename = {p.id: f"{tag}:{p.id}" for p in config.points}
    points = tuple(replace(p, id=rename[p.id]) for p in config.points)
    edges = tuple(replace(e, point=rename[e.point]) if e.point else e for e in config.edges)
    return replace(config, points=points, edges=edges)


def _union(parts: Sequence[Config], ledger: InvariantLedger) -> Config:
    return Config(
        tuple(c for part in parts for c in part.curves),
        tuple(e for part in parts for e in part.edges),
        tuple(p for part in parts for p in part.points),
        ledger,
    )


def _prepared(label: str, prefix: str) -> Tuple[Config, int]:
    config, count = prepare_fiber(label, prefix=prefix)
    return _tag_points(config, prefix), count


def _branch_curves(config: Config, prefix: str) -> List[str]:
    """(-4)-curves of a prepared fiber."""
    return [c.id for c in config.curves if c.id.startswith(f"{prefix}.") and c.self_int == -4]


def _case_for(label: str) -> str:
    kind = normalize_type(label)
    named = {'II': 'alpha', 'III': 'beta', 'IV': 'gamma'}
    if kind in named:
        return named[kind]
    n = i_index(kind)
    if n is None or n < 1:
        raise ValueError(f"No ramified cover case for fiber type {label}")
    return f"delta({n})"


def _half_fiber(s: int, prefix: str) -> Config:
    """Reduced I_s (s = 0: smooth) fiber used as the half of a multiple fiber."""
    _, config = fiber_data(f"I{s}", prefix=f"{prefix}.")
    return _tag_points(config, prefix)


def _preimage(upstairs: Config, ids: Sequence[str]) -> Config:
    wanted = set()
    for curve_id in ids:
        wanted |= {f"C({curve_id})", f"G({curve_id})", f"G'({curve_id})"}
    return upstairs.subconfig([c for c in upstairs.curve_ids if c in wanted])


def _two_prepared_fibers(kind1: str, kind2: str) -> Tuple[Config, Dict[str, Tuple[str, ...]]]:
    first, c1 = _prepared(kind1, 'F1')
    second, c2 = _prepared(kind2, 'F2')
    config = _union([first, second], BASE_LEDGER.blown_up(c1 + c2))
    return config, {'F1': first.curve_ids, 'F2': second.curve_ids}


def _elliptic_type(kind: str) -> Tuple[Config, Dict[str, Tuple[str, ...]], List[str]]:
    """Smooth ramification fiber F1 plus a prepared singular fiber Finf."""
    prepared, count = _prepared(kind, 'Finf')
    builder = ConfigBuilder.from_config(_union([prepared], BASE_LEDGER.blown_up(count)))
    builder.add_curve('F1', 0, genus=1)
    config = builder.build()
    return config, {'Finf': prepared.curve_ids}, ['F1'] + _branch_curves(prepared, 'Finf')


def _cover_expectations(k_squared: int, m: int, genera: Sequence[int],
                        fibers: Optional[Dict[str, str]] = None,
                        rho_provenance: Provenance = Provenance.DERIVED) -> List[Expectation]:
    expected = [
        Expectation('k_squared', k_squared),
        Expectation('rho_S', 10 - k_squared, rho_provenance),
        Expectation('euler_S', 12 - k_squared),
        Expectation('branch_ok', True, Provenance.STATED),
        Expectation('euler_X', 24, Provenance.STATED),
        Expectation('k3', True, Provenance.STATED),
        Expectation('m', m, Provenance.STATED),
        Expectation('fixed_genera', tuple(sorted(genera)), Provenance.STATED),
    ]
    if fibers is not None:
        expected.append(Expectation('upstairs_fibers', dict(fibers), Provenance.STATED))
    return expected


COVER_MUTATIONS = ('drop_blow_up', 'move_branch')


# ============================================================================
# Scenario Builders
# ============================================================================

def lemma2_4a(n1: int, n2: int) -> Scenario:
    n = n1 + n2

    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        config, fibers = _two_prepared_fibers(f"I{n1}", f"I{n2}")
        branch = _branch_curves(config, 'F1') + _branch_curves(config, 'F2')
        return ScenarioPlan(
            BranchData.from_ids(config, branch, fibers),
            cases={'F1': f"delta({n1})", 'F2': f"delta({n2})"},
        )

    return Scenario(
        f"lemma2_4a({n1},{n2})",
        f"prepared I{n1} and I{n2} ramification fibers, {n} fixed rational curves",
        build,
        tuple(_cover_expectations(-n, n, [0] * n, {'F1': f"I{2 * n1}", 'F2': f"I{2 * n2}"},
                                  rho_provenance=Provenance.STATED)),
        COVER_MUTATIONS,
    )


def _fiber_chain(kind: str, prefix: str) -> List[str]:
    """(-4)-curves of a prepared fiber joined by its (-1)-curves, in chain order."""
    kind = normalize_type(kind)
    if kind == 'II':
        return [f"{prefix}.D1"]
    if kind == 'III':
        return [f"{prefix}.D1", f"{prefix}.H1", f"{prefix}.D2"]
    n = i_index(kind)
    if n is None or n < 1:
        raise ValueError(f"A prepared {kind} fiber has no linear chain of (-4)- and (-1)-curves")
    return index_two_chain_ids(n, f"{prefix}.D", f"{prefix}.H")


def _example2_8_plan(kind1: str, kind2: str, trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
    config, fibers = _two_prepared_fibers(kind1, kind2)
    first, second = _fiber_chain(kind1, 'F1'), _fiber_chain(kind2, 'F2')
    builder = ConfigBuilder.from_config(config)
    builder.add_curve('M', -1)
    builder.meet(first[-1], 'M', point_id='M:1')
    builder.meet('M', second[0], point_id='M:2')
    config = builder.build()
    branch = _branch_curves(config, 'F1') + _branch_curves(config, 'F2')
    return ScenarioPlan(
        BranchData.from_ids(config, branch, fibers, {'M': 'non_split'}),
        cases={'F1': _case_for(kind1), 'F2': _case_for(kind2)},
        contractions=[tuple(first + ['M'] + second)],
    )


def _example2_8_scenario(name: str, description: str, kind1: str, kind2: str) -> Scenario:
    counts = [(len(_fiber_chain(kind, 'F')) + 1) // 2 for kind in (kind1, kind2)]
    if sum(counts) != 10:
        raise ValueError(f"{name}: the two fibers give {sum(counts)} (-4)-curves, expected 10")
    targets = {
        fiber: CoverCase.parse(_case_for(kind)).target_kodaira
        for fiber, kind in (('F1', kind1), ('F2', kind2))
    }
    expected = _cover_expectations(-10, 10, [0] * 10, targets)
    expected += [
        Expectation('singularities', ('C_{40,19}',), Provenance.STATED),
        Expectation('rho_singular', 1),
        Expectation('k_squared_contracted', 0),
    ]
    return Scenario(
        name,
        description,
        lambda trace=None: _example2_8_plan(kind1, kind2, trace),
        tuple(expected),
        COVER_MUTATIONS,
    )


def example2_8(n1: int, n2: int) -> Scenario:
    if n1 + n2 != 10:
        raise ValueError(f"example2_8 needs n1 + n2 = 10, got ({n1}, {n2})")
    return _example2_8_scenario(
        f"example2_8({n1},{n2})",
        f"section through I{n1} and I{n2}; the 19-curve chain contracts to one index-two point",
        f"I{n1}", f"I{n2}",
    )


def example2_8_fibers(kind1: str, kind2: str) -> Scenario:
    """The same chain built from a type II or III fiber and an I_n fiber."""
    kind1, kind2 = normalize_type(kind1), normalize_type(kind2)
    return _example2_8_scenario(
        f"example2_8({kind1},{kind2})",
        f"section through {kind1} and {kind2}; the 19-curve chain contracts to one index-two point",
        kind1, kind2,
    )


def _lemma3_2_plan(n: int, trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
    _, blown = index_two_resolution(n, ledger=BASE_LEDGER)
    builder = ConfigBuilder.from_config(blown)
    builder.add_curve('F', 4, genus=2)
    config = builder.build()
    branch = [f"D{j}" for j in range(1, n + 1)] + ['F']
    annotations = {f"H{j}": 'non_split' for j in range(1, n)}
    return ScenarioPlan(
        BranchData.from_ids(config, branch, {}, annotations),
        contractions=[tuple(index_two_chain_ids(n))],
    )


def lemma3_2_n9() -> Scenario:
    expected = _cover_expectations(-8, 10, [0] * 9 + [2])
    expected[1] = Expectation('rho_S', 18, Provenance.STATED)
    expected += [
        Expectation('singularities', ('C_{36,17}',), Provenance.STATED),
        Expectation('rho_singular', 1, Provenance.STATED),
        Expectation('k_squared_contracted', 1),
        Expectation('dim_anti_bicanonical', 3, Provenance.STATED),
    ]
    return Scenario(
        'lemma3_2_n9',
        "nine (-4)-curves joined by (-1)-curves plus a genus-2 branch curve of square 4",
        lambda trace=None: _lemma3_2_plan(9, trace),
        tuple(expected),
        COVER_MUTATIONS,
    )


def lemma3_2_dimension(ns: Sequence[int]) -> Scenario:
    ns = tuple(sorted(set(int(n) for n in ns)))

    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        k_by_n, dims, formula = {}, {}, True
        for n in ns:
            _, blown = index_two_resolution(n, ledger=BASE_LEDGER)
            result = contract_chain(blown, index_two_chain_ids(n), trace=trace)
            k_contracted = _contracted_k_squared(blown.ledger.k_squared, [result])
            k_by_n[n] = k_contracted
            dims[n] = dim_anti_bicanonical(int(k_contracted))
            formula &= k_contracted == n + blown.ledger.k_squared
        _, largest = index_two_resolution(ns[-1], ledger=BASE_LEDGER)
        return ScenarioPlan(
            BranchData.from_ids(largest, []),
            cover=False,
            extra={'k_squared_contracted_by_n': k_by_n, 'dimension_by_n': dims, 'k_squared_formula': formula},
        )

    top = ns[-1]
    return Scenario(
        'lemma3_2_dimension',
        "anti-bicanonical dimension 3(n + K^2) after contracting one index-two point, across n",
        build,
        (
            Expectation('k_squared', 1 - top),
            Expectation('rho_S', 9 + top),
            Expectation('k_squared_contracted_by_n', {n: 1 for n in ns}),
            Expectation('dimension_by_n', {n: 3 for n in ns}, Provenance.STATED),
            Expectation('k_squared_formula', True),
        ),
    )


def lemma4_1() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        builder = ConfigBuilder(BASE_LEDGER)
        builder.add_curve('F1', 0, genus=1).add_curve('F2', 0, genus=1).add_curve('M', -1)
        builder.meet('F1', 'M', point_id='M:1')
        builder.meet('M', 'F2', point_id='M:2')
        return ScenarioPlan(BranchData.from_ids(builder.build(), ['F1', 'F2'], {}, {'M': 'non_split'}))

    return Scenario(
        'lemma4_1',
        "two smooth ramification fibers and a section; two elliptic fixed curves",
        build,
        tuple(_cover_expectations(0, 2, [1, 1])),
        COVER_MUTATIONS,
    )


def lemma5_1(s: int) -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        half = _half_fiber(s, 'F2')
        builder = ConfigBuilder.from_config(_union([half], BASE_LEDGER))
        builder.add_curve('F1', 0, genus=1)
        config = builder.build()
        return ScenarioPlan(
            BranchData.from_ids(config, ['F1'], {'F2': half.curve_ids}),
            cases={'F2': f"epsilon({s})"},
        )

    target = 'smooth' if s == 0 else f"I{2 * s}"
    return Scenario(
        f"lemma5_1({s})",
        f"smooth ramification fiber and a multiple fiber with I{s} half; one elliptic fixed curve",
        build,
        tuple(_cover_expectations(0, 1, [1], {'F2': target})),
        COVER_MUTATIONS,
    )


def lemma2_4b(n1: int, s2: int) -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        first, count = _prepared(f"I{n1}", 'F1')
        half = _half_fiber(s2, 'F2')
        config = _union([first, half], BASE_LEDGER.blown_up(count))
        return ScenarioPlan(
            BranchData.from_ids(config, _branch_curves(config, 'F1'),
                                {'F1': first.curve_ids, 'F2': half.curve_ids}),
            cases={'F1': f"delta({n1})", 'F2': f"epsilon({s2})"},
        )

    target = 'smooth' if s2 == 0 else f"I{2 * s2}"
    return Scenario(
        f"lemma2_4b({n1},{s2})",
        f"prepared I{n1} ramification fiber and a multiple fiber with I{s2} half",
        build,
        tuple(_cover_expectations(-n1, n1, [0] * n1, {'F1': f"I{2 * n1}", 'F2': target},
                                  rho_provenance=Provenance.STATED)),
        COVER_MUTATIONS,
    )


def lemma6_1(kind: str) -> Scenario:
    kind = normalize_type(kind)
    case = CoverCase.parse(_case_for(kind))

    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        config, fibers, branch = _elliptic_type(kind)
        return ScenarioPlan(BranchData.from_ids(config, branch, fibers), cases={'Finf': str(case)})

    n_inf = len(_branch_curves(prepare_fiber(kind, prefix='Finf')[0], 'Finf'))
    return Scenario(
        f"lemma6_1({kind})",
        f"smooth ramification fiber plus a prepared {kind} fiber; {1 + n_inf} fixed curves",
        build,
        tuple(_cover_expectations(-n_inf, 1 + n_inf, [0] * n_inf + [1], {'Finf': case.target_kodaira},
                                  rho_provenance=Provenance.STATED)),
        COVER_MUTATIONS,
    )


def example2_7() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        builder = ConfigBuilder(InvariantLedger.rational(9))
        builder.add_curve('D', 36, genus=10)
        nodes = [builder.add_point(f"node{k}", ['D', 'D']) for k in range(1, 11)]
        config = builder.build()
        for k, point_id in enumerate(nodes, start=1):
            config = blow_up(config, point_id, f"E{k}", trace=trace)
        return ScenarioPlan(
            BranchData.from_ids(config, ['D'], {}, {f"E{k}": 'non_split' for k in range(1, 11)}),
            contractions=[('D',)],
            downstairs_probes={'branch_curve': lambda c: (c.curve('D').self_int, c.curve('D').genus)},
            notes=[
                "input read as a rational plane sextic with 10 nodes: K^2 = 9 - 10 = -1, "
                "branch = proper transform of the sextic",
            ],
        )

    expected = _cover_expectations(-1, 1, [0])
    expected += [
        Expectation('branch_curve', (-4, 0)),
        Expectation('singularities', ('C_{4,1}',), Provenance.STATED),
        Expectation('rho_singular', 10),
    ]
    return Scenario(
        'example2_7',
        "plane sextic with ten nodes blown up at the nodes; one (-4)-curve contracts to C_{4,1}",
        build,
        tuple(expected),
        COVER_MUTATIONS,
    )


def corollary5_r10() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        plan = lemma2_4a(5, 5).builder(trace)
        plan.contractions = [(curve_id,) for curve_id in sorted(plan.branch.branch_ids)]
        return plan

    expected = _cover_expectations(-10, 10, [0] * 10, {'F1': 'I10', 'F2': 'I10'})
    expected += [
        Expectation('singularities', ('C_{4,1}',) * 10, Provenance.STATED),
        Expectation('singular_point_count', 10, Provenance.STATED),
        Expectation('rho_singular', 10),
        Expectation('k_squared_contracted', 0),
    ]
    return Scenario(
        'corollary5_r10',
        "ten disjoint (-4)-curves contracted to ten C_{4,1} points",
        build,
        tuple(expected),
        COVER_MUTATIONS,
    )


def corollary8_arith() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        _, fiber = fiber_data('I9', prefix='F')
        builder = ConfigBuilder.from_config(fiber)
        builder.add_curve('M', -1)
        builder.meet('M', 'F1', point_id='M:1')
        config = blow_down(builder.build(), 'M', trace=trace)
        return ScenarioPlan(
            BranchData.from_ids(config, []),
            cover=False,
            contractions=[tuple(f"F{j}" for j in range(2, 10))],
            downstairs_probes={
                'dynkin_type': lambda c: dynkin_type(c.subconfig([f"F{j}" for j in range(2, 10)])),
            },
        )

    return Scenario(
        'corollary8_arith',
        "I9 fiber with a section blown down; the remaining A8 chain contracts",
        build,
        (
            Expectation('k_squared', 1, Provenance.STATED),
            Expectation('rho_S', 9, Provenance.STATED),
            Expectation('dynkin_type', 'A8'),
            Expectation('singularities', ('A8',)),
            Expectation('rho_singular', 1, Provenance.STATED),
        ),
    )


def persson_extremal() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        fibration = EllipticFibration((('F1', 'I9'), ('F2', 'I1'), ('F3', 'I1'), ('F4', 'I1')))
        prepared, _ = prepare_fiber('I9', prefix='F1')
        case = CoverCase.parse('delta(9)')
        realizable = {tuple(sorted(c)) for c in REALIZABLE_CONFIGURATIONS}
        return ScenarioPlan(
            BranchData.from_ids(prepared, []),
            cover=False,
            extra={
                'euler_sum_ok': fibration.is_complete(),
                'rank_bound_ok': fibration.rank_bound_ok(),
                'realizable': tuple(sorted(fibration.singular_types())) in realizable,
                'trivial_lattice_rank': trivial_lattice_rank(fibration.singular_types()),
                'prepared_case': matches_case(prepared, case),
                'upstairs_kodaira': kodaira_type(pullback_fiber(prepared, case)),
            },
        )

    return Scenario(
        'persson_extremal',
        "extremal fibration {I9, 3 I1}; the prepared I9 fiber is a delta(9) loop",
        build,
        (
            Expectation('k_squared', -9),
            Expectation('rho_S', 19, Provenance.STATED),
            Expectation('euler_sum_ok', True, Provenance.TRIVIAL),
            Expectation('rank_bound_ok', True, Provenance.TRIVIAL),
            Expectation('realizable', True, Provenance.STATED),
            Expectation('trivial_lattice_rank', 10),
            Expectation('prepared_case', True),
            Expectation('upstairs_kodaira', 'I18'),
        ),
    )


def theorem3prime_types() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        plans = {
            'Rat': _example2_8_plan('I1', 'I9', trace),
            'Ell': lemma6_1('I9').builder(trace),
            'Gn2': _lemma3_2_plan(9, trace),
        }
        rho, m, genera = {}, {}, {}
        for name, plan in plans.items():
            report = canonical_resolution(plan.branch, plan.cases)
            rho[name] = plan.branch.config.ledger.rho
            m[name] = report.fixed_locus.m
            genera[name] = report.fixed_locus.genera
        plan = plans['Rat']
        plan.extra = {'rho_by_type': rho, 'm_by_type': m, 'genera_by_type': genera}
        return plan

    expected = _cover_expectations(-10, 10, [0] * 10)
    expected += [
        Expectation('rho_by_type', {'Rat': 20, 'Ell': 19, 'Gn2': 18}, Provenance.STATED),
        Expectation('m_by_type', {'Rat': 10, 'Ell': 10, 'Gn2': 10}, Provenance.STATED),
        Expectation('genera_by_type', {
            'Rat': (0,) * 10, 'Ell': (0,) * 9 + (1,), 'Gn2': (0,) * 9 + (2,),
        }, Provenance.STATED),
    ]
    return Scenario(
        'theorem3prime_types',
        "the three extremal types with ten fixed curves: rational, elliptic, genus 2",
        build,
        tuple(expected),
        COVER_MUTATIONS,
    )


def theorem3prime_nodal_member() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        _, nodal = fiber_data('I1', prefix='F1.D')
        nodal = _tag_points(nodal, 'F1')
        second, count = _prepared('I9', 'F2')
        config = _union([nodal, second], BASE_LEDGER.blown_up(count))
        config = blow_up(config, nodal.points[0].id, 'F1.H1', trace=trace)
        fibers = {'F1': ('F1.D1', 'F1.H1'), 'F2': second.curve_ids}
        branch = BranchData.from_ids(config, ['F1.D1'] + _branch_curves(config, 'F2'), fibers)
        reference = lemma2_4a(1, 9).builder(None).branch.config
        return ScenarioPlan(
            branch,
            cases={'F1': 'delta(1)', 'F2': 'delta(9)'},
            extra={'matches_rational_type': branch.config.same_shape(reference)},
        )

    expected = _cover_expectations(-10, 10, [0] * 10, {'F1': 'I2', 'F2': 'I18'})
    expected.append(Expectation('matches_rational_type', True, Provenance.STATED))
    return Scenario(
        'theorem3prime_nodal_member',
        "nodal ramification fiber blown up at its node gives the rational type",
        build,
        tuple(expected),
        COVER_MUTATIONS,
    )


def theorem3prime_split_member() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        prepared, count = _prepared('I9', 'Finf')
        config = prepared.with_changes(ledger=BASE_LEDGER.blown_up(count))
        branch = set(_branch_curves(config, 'Finf'))
        # fiber class plus the (-4)-curves, as coefficients
        coefficients = {c.id: c.mult + (1 if c.id in branch else 0) for c in config.curves}
        divisible = all(v % 2 == 0 for v in coefficients.values())
        return ScenarioPlan(
            BranchData.from_ids(config, []),
            cover=False,
            extra={
                'branch_divisible_by_two': divisible,
                'split_cover_components': 2 if divisible else 1,
                'split_cover_euler': 2 * config.ledger.euler if divisible else None,
            },
        )

    return Scenario(
        'theorem3prime_split_member',
        "ramification fiber merged into the I9 fiber: the branch divisor is divisible by two",
        build,
        (
            Expectation('k_squared', -9),
            Expectation('rho_S', 19),
            Expectation('branch_divisible_by_two', True, Provenance.STATED),
            Expectation('split_cover_components', 2, Provenance.STATED),
            Expectation('split_cover_euler', 42),
        ),
    )


def _elliptic_with_bisection(tangent: bool) -> Tuple[Config, Dict[str, Tuple[str, ...]], List[str]]:
    config, fibers, branch = _elliptic_type('I9')
    builder = ConfigBuilder.from_config(config)
    builder.add_curve('H0', -1)
    if tangent:
        builder.meet('F1', 'H0', point_id='H0:1', contact=2)
    else:
        builder.meet('F1', 'H0', point_id='H0:1')
        builder.meet('F1', 'H0', point_id='H0:2')
    builder.meet('Finf.H9', 'H0', point_id='H0:3')
    return builder.build(), fibers, branch


def theorem3prime_tangent_bisection() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        config, fibers, branch = _elliptic_with_bisection(tangent=True)
        return ScenarioPlan(
            BranchData.from_ids(config, branch, fibers, {'H0': 'split'}),
            cases={'Finf': 'delta(9)'},
            upstairs_probes={
                'bisection_preimage': lambda up: (
                    up.curve('G(H0)').self_int,
                    up.curve("G'(H0)").self_int,
                    up.intersection('G(H0)', "G'(H0)"),
                ),
            },
        )

    expected = _cover_expectations(-9, 10, [0] * 9 + [1], {'Finf': 'I18'})
    expected.append(Expectation('bisection_preimage', (-2, -2, 1), Provenance.STATED))
    return Scenario(
        'theorem3prime_tangent_bisection',
        "bisection tangent to the ramification fiber splits into two (-2)-curves",
        build,
        tuple(expected),
        COVER_MUTATIONS,
    )


def theorem3prime_gn2_from_ell() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        config, _, _ = _elliptic_with_bisection(tangent=False)
        config = blow_down(config, 'H0', trace=trace)
        return ScenarioPlan(
            BranchData.from_ids(config, []),
            cover=False,
            contractions=[tuple(index_two_chain_ids(9, 'Finf.D', 'Finf.H'))],
            downstairs_probes={'branch_curve': lambda c: (c.curve('F1').self_int, c.curve('F1').genus)},
        )

    return Scenario(
        'theorem3prime_gn2_from_ell',
        "blowing down a bisection turns the elliptic type into the genus-2 type",
        build,
        (
            Expectation('k_squared', -8),
            Expectation('rho_S', 18, Provenance.STATED),
            Expectation('branch_curve', (4, 2), Provenance.STATED),
            Expectation('singularities', ('C_{36,17}',), Provenance.STATED),
            Expectation('rho_singular', 1),
            Expectation('k_squared_contracted', 1),
            Expectation('dim_anti_bicanonical', 3, Provenance.STATED),
        ),
    )


def lemma1_2_enriques() -> Scenario:
    def build(trace: Optional[BirationalTrace] = None) -> ScenarioPlan:
        return ScenarioPlan(BranchData.from_ids(Config((), (), (), ENRIQUES_LEDGER), []))

    return Scenario(
        'lemma1_2_enriques',
        "empty branch locus on a non-rational surface: unramified cover, flagged",
        build,
        (
            Expectation('k_squared', 0),
            Expectation('rho_S', 10),
            Expectation('enriques_case', True, Provenance.STATED),
            Expectation('k3', False),
            Expectation('euler_X', 24),
        ),
    )


# ============================================================================
# Mutations
# ============================================================================

def drop_blow_up(plan: ScenarioPlan) -> ScenarioPlan:
    """Undo one blow-up: blow down a (-1)-curve, or move the ledger up one step if there is none."""
    config = plan.branch.config
    target = next(
        (c.id for c in config.curves
         if c.self_int == -1 and c.genus == 0 and c.id not in plan.branch.branch_ids
         and not any(e.is_self for e in config.edges_at(c.id))),
        None,
    )
    if target is None:
        config = config.with_changes(ledger=config.ledger.blown_down())
        note = "mutation drop_blow_up: ledger moved up one blow-up"
    else:
        config = blow_down(config, target)
        note = f"mutation drop_blow_up: blew down {target}"
    fibers = {name: tuple(i for i in ids if i != target) for name, ids in plan.branch.fibers.items()}
    annotations = {k: v for k, v in plan.branch.annotations.items() if k != target}
    branch = BranchData.from_ids(config, plan.branch.branch_ids, fibers, annotations)
    return replace(plan, branch=branch, notes=plan.notes + [note])


def move_branch(plan: ScenarioPlan) -> ScenarioPlan:
    """Drop one branch curve from the branch set."""
    if not plan.branch.branch_ids:
        raise ValueError("move_branch needs a non-empty branch set")
    victim = sorted(plan.branch.branch_ids)[0]
    branch = BranchData.from_ids(
        plan.branch.config, plan.branch.branch_ids - {victim}, plan.branch.fibers, plan.branch.annotations
    )
    return replace(plan, branch=branch, notes=plan.notes + [f"mutation move_branch: removed {victim}"])


MUTATIONS: Dict[str, Callable[[ScenarioPlan], ScenarioPlan]] = {
    'drop_blow_up': drop_blow_up,
    'move_branch': move_branch,
}


# ============================================================================
# Registry
# ============================================================================

def build_registry(config: Optional[Dict] = None) -> Dict[str, Scenario]:
    """
    All scenarios, parametrized from the scenarios: config section.

    Parameters
    ----------
    config : dict, optional
        Loaded configuration; missing keys fall back to DEFAULT_PARAMETERS

    Returns
    -------
    Dict[str, Scenario]
        Scenarios by name, in registration order
    """
    def param(key: str):
        return config_section(config, 'scenarios', key, default=DEFAULT_PARAMETERS[key])

    scenarios: List[Scenario] = []
    for n1, n2 in enumerate_pairs(config_section(config, 'enumeration', 'max_pair_total', default=10)):
        if n1 <= n2:
            scenarios.append(lemma2_4a(n1, n2))
    scenarios += [example2_8(n1, n2) for n1, n2 in param('example2_8_pairs')]
    scenarios += [example2_8_fibers(k1, k2) for k1, k2 in param('example2_8_fiber_pairs')]
    scenarios += [lemma3_2_n9(), lemma3_2_dimension(param('lemma3_2_n')), lemma4_1()]
    scenarios += [lemma5_1(s) for s in param('lemma5_1_s')]
    scenarios += [lemma6_1(kind) for kind in param('lemma6_1_types')]
    scenarios += [lemma2_4b(n1, s2) for n1, s2 in param('lemma2_4b_cases')]
    scenarios += [
        example2_7(),
        corollary5_r10(),
        corollary8_arith(),
        persson_extremal(),
        theorem3prime_types(),
        theorem3prime_nodal_member(),
        theorem3prime_split_member(),
        theorem3prime_tangent_bisection(),
        theorem3prime_gn2_from_ell(),
        lemma1_2_enriques(),
    ]

    registry = {}
    for scenario in scenarios:
        if scenario.name in registry:
            raise ValueError(f"Duplicate scenario name: {scenario.name}")
        registry[scenario.name] = scenario
    logger.debug(f"Registered {len(registry)} scenarios")
    return registry


def list_scenarios(config: Optional[Dict] = None) -> List[Tuple[str, str]]:
    """(name, description) for every registered scenario."""
    return [(s.name, s.description) for s in build_registry(config).values()]


def registry_coverage(registry: Optional[Dict[str, Scenario]] = None) -> set:
    """Declared fixed-curve counts m across the registry."""
    registry = registry or build_registry()
    found = set()
    for scenario in registry.values():
        expectation = scenario.expectation('m')
        if expectation is not None:
            found.add(expectation.expected)
    return found


# ============================================================================
# Runner
# ============================================================================

def _contracted_k_squared(k_squared: int, results) -> Fraction:
    """K^2 after the contractions: blow-downs plus sum alpha_k (w_k - 2) per singular point."""
    value = Fraction(k_squared)
    for result in results:
        value += result.blow_downs
        if result.weights:
            vector = discrepancies(chain_config(result.weights))
            value += sum(a * (w - 2) for a, w in zip(vector, result.weights))
    return value


def _run_probes(probes: Dict[str, Probe], config: Config, values: Dict[str, Any]):
    for name, probe in probes.items():
        try:
            values[name] = probe(config)
        except ValueError as e:
            values[name] = f"<error: {e}>"


def _measure(plan: ScenarioPlan, trace: Optional[BirationalTrace]) -> Tuple[Dict[str, Any], Dict[str, Config], Optional[CoverReport]]:
    config = plan.branch.config
    ledger = config.ledger
    values: Dict[str, Any] = {
        'k_squared': ledger.k_squared,
        'rho_S': ledger.rho,
        'euler_S': ledger.euler,
        'branch_ok': validate_branch(plan.branch).ok,
    }
    artifacts = {'downstairs': config}
    _run_probes(plan.downstairs_probes, config, values)

    report = None
    if plan.cover:
        report = canonical_resolution(plan.branch, plan.cases, strict=False)
        values.update({
            'euler_X': report.euler_upstairs,
            'k3': report.k3,
            'enriques_case': report.enriques_case,
            'k_plus_half_b_squared': report.k_plus_half_b_squared,
        })
        if report.fixed_locus is not None:
            values['m'] = report.fixed_locus.m
            values['fixed_genera'] = report.fixed_locus.genera
        if report.upstairs is not None:
            artifacts['upstairs'] = report.upstairs
            values['upstairs_fibers'] = {
                name: kodaira_type(_preimage(report.upstairs, ids))
                for name, ids in plan.branch.fibers.items()
            }
            _run_probes(plan.upstairs_probes, report.upstairs, values)

    if plan.contractions:
        contracted = config
        results = []
        for chain in plan.contractions:
            result = contract_chain(contracted, chain, trace=trace)
            results.append(result)
            contracted = result.config
        k_contracted = _contracted_k_squared(ledger.k_squared, results)
        values['singularities'] = tuple(r.label for r in results)
        values['singular_point_count'] = len(contracted.singular_points)
        values['rho_singular'] = contracted.rho_singular
        values['k_squared_contracted'] = k_contracted
        if k_contracted.denominator == 1 and k_contracted >= 1:
            values['dim_anti_bicanonical'] = dim_anti_bicanonical(int(k_contracted))
        artifacts['contracted'] = contracted

    values.update(plan.extra)
    return values, artifacts, report


def run_scenario(name: str, mutation: Optional[str] = None, registry: Optional[Dict[str, Scenario]] = None,
                 trace: Optional[BirationalTrace] = None) -> ScenarioReport:
    """
    Build a scenario, optionally mutate it, and compare every expectation exactly.

    Parameters
    ----------
    name : str
        Registered scenario name
    mutation : str, optional
        'drop_blow_up' or 'move_branch'
    registry : dict, optional
        Registry to look the name up in (default: build_registry())
    trace : BirationalTrace, optional
        Receives the birational steps of the builder and the contractions

    Returns
    -------
    ScenarioReport
        Per-expectation results and artifacts
    """
    registry = registry or build_registry()
    if name not in registry:
        raise ValueError(f"Unknown scenario: {name}")
    scenario = registry[name]
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"Unknown mutation: {mutation}")

    logger.info(f"Running scenario {name}" + (f" with mutation {mutation}" if mutation else ""))
    values: Dict[str, Any] = {}
    artifacts: Dict[str, Config] = {}
    report = None
    error = None
    plan = None
    try:
        plan = scenario.builder(trace)
        if mutation is not None:
            plan = MUTATIONS[mutation](plan)
        values, artifacts, report = _measure(plan, trace)
    except ValueError as e:
        error = str(e)
        logger.warning(f"Scenario {name} raised: {e}")

    missing = object()
    results = []
    for expectation in scenario.expected:
        actual = values.get(expectation.name, missing)
        passed = actual is not missing and actual == expectation.expected
        results.append(ExpectationResult(
            expectation.name, expectation.expected, None if actual is missing else actual,
            expectation.provenance, passed,
        ))

    notes = list(plan.notes) if plan is not None else []
    if report is not None:
        notes += report.notes
    outcome = ScenarioReport(name, mutation, results, artifacts, report, notes, error)
    logger.info(f"Scenario {name}: {'PASS' if outcome.passed else 'FAIL'} "
                f"({len(results) - len(outcome.failures)}/{len(results)} expectations)")
    return outcome


def verify_all(config: Optional[Dict] = None) -> Tuple[List[ScenarioReport], pd.DataFrame]:
    """
    Run every registered scenario.

    Returns
    -------
    Tuple[List[ScenarioReport], pd.DataFrame]
        Reports and a summary table (scenario, expectations, passed, failed, m, rho_S, euler_X)
    """
    registry = build_registry(config)
    reports = [run_scenario(name, registry=registry) for name in registry]
    rows = [
        {
            'scenario': r.name,
            'expectations': len(r.results),
            'passed': len(r.results) - len(r.failures),
            'failed': len(r.failures),
            'm': r.value('m'),
            'rho_S': r.value('rho_S'),
            'euler_X': r.value('euler_X'),
        }
        for r in reports
    ]
    summary = pd.DataFrame(rows, columns=['scenario', 'expectations', 'passed', 'failed', 'm', 'rho_S', 'euler_X'])
    return reports, summary


if __name__ == "__main__":
    reports, summary = verify_all()
    print(summary.to_string(index=False))
