import numpy as np
import pytest

from k3calc.birational import (
    BirationalTrace,
    BlowDownRecord,
    BlowUpRecord,
    blow_down,
    blow_up,
    blow_up_points,
    contract_chain,
)
from k3calc.cyclic_sing import (
    BrieskornType,
    chain_config,
    index_two_chain_ids,
    index_two_resolution,
    index_two_weights,
)
from k3calc.dualgraph import ConfigBuilder, InvariantLedger
from k3calc.fibration import fiber_data


# ============================================================================
# Blow-up
# ============================================================================

def test_blow_up_transversal_point(two_lines):
    blown = blow_up(two_lines, 'q', 'E')
    assert blown.curve('L1').self_int == 0
    assert blown.curve('L2').self_int == 0
    assert blown.curve('E').self_int == -1
    assert blown.intersection('L1', 'L2') == 0
    assert blown.intersection('L1', 'E') == 1
    assert blown.intersection('L2', 'E') == 1
    assert blown.ledger == InvariantLedger.rational(8)


def test_blow_up_node_of_nodal_curve():
    _, fiber = fiber_data('I1')
    node = fiber.points[0].id
    blown = blow_up(fiber, node, 'E')
    assert blown.curve('F1').self_int == -4
    assert blown.curve('F1').genus == 0
    assert blown.curve('E').mult == 2
    assert blown.intersection('F1', 'E') == 2
    assert not any(e.is_self for e in blown.edges)


def test_blow_up_tangency_keeps_one_common_point():
    builder = ConfigBuilder(InvariantLedger.rational(0))
    builder.add_curve('A', -2).add_curve('B', -2)
    builder.meet('A', 'B', point_id='t', contact=2)
    blown = blow_up(builder.build(), 't', 'E', total_transform=False)
    assert blown.intersection('A', 'B') == 1
    triple = [p for p in blown.points if len(p.branches) == 3]
    assert len(triple) == 1
    assert set(triple[0].curves) == {'A', 'B', 'E'}
    assert blown.curve('E').mult == 1


def test_blow_up_shifts_canonical_degree():
    _, fiber = fiber_data('I1')
    before = fiber.curve('F1').k_dot
    blown = blow_up(fiber, fiber.points[0].id, 'E')
    assert blown.curve('F1').k_dot == before + 2
    assert blown.curve('E').k_dot == -1


def test_blow_up_cusp():
    _, fiber = fiber_data('II')
    blown = blow_up(fiber, fiber.points[0].id, 'E')
    assert blown.curve('F1').self_int == -4
    assert blown.curve('F1').genus == 0
    assert blown.intersection('F1', 'E') == 2


def test_blow_up_rejects_existing_id(two_lines):
    with pytest.raises(ValueError):
        blow_up(two_lines, 'q', 'L1')
    with pytest.raises(ValueError):
        blow_up(two_lines, 'nowhere')


def test_blow_up_points_names_and_trace(two_lines):
    builder = ConfigBuilder.from_config(two_lines)
    builder.add_curve('L3', 1)
    builder.meet('L1', 'L3', point_id='r')
    builder.meet('L2', 'L3', point_id='s')
    trace = BirationalTrace()
    blown = blow_up_points(builder.build(), ['q', 'r', 's'], prefix='E', trace=trace)
    assert {'E1', 'E2', 'E3'} <= set(blown.curve_ids)
    assert [blown.curve(f"L{j}").self_int for j in (1, 2, 3)] == [-1, -1, -1]
    assert len(trace) == 3
    assert all(isinstance(record, BlowUpRecord) for record, _ in trace.steps)


# ============================================================================
# Blow-down
# ============================================================================

def test_blow_down_restores_intersection(two_lines):
    blown = blow_up(two_lines, 'q', 'E')
    restored = blow_down(blown, 'E')
    assert restored.intersection('L1', 'L2') == 1
    assert restored.curve('L1').self_int == 1
    assert restored.ledger == two_lines.ledger


def test_blow_down_joins_two_minus_four_curves():
    down = blow_down(chain_config([4, 1, 4]), 'B2')
    assert down.curve_ids == ('B1', 'B3')
    assert down.curve('B1').self_int == -3
    assert down.curve('B3').self_int == -3
    assert down.intersection('B1', 'B3') == 1
    point = down.points_on('B1')[0]
    assert sorted(point.curves) == ['B1', 'B3']
    assert point.contacts == ((0, 1, 1),)
    assert down.same_shape(chain_config([3, 3], ledger=down.ledger))


def test_blow_down_two_points_creates_node():
    builder = ConfigBuilder(InvariantLedger.rational(-1))
    builder.add_curve('F', 0, genus=1).add_curve('E', -1)
    builder.meet('F', 'E')
    builder.meet('F', 'E')
    down = blow_down(builder.build(), 'E')
    assert down.curve('F').self_int == 4
    assert down.curve('F').genus == 2
    assert any(e.is_self for e in down.edges_at('F'))


def test_blow_down_contact_two_creates_cusp():
    builder = ConfigBuilder(InvariantLedger.rational(-1))
    builder.add_curve('D', -4).add_curve('E', -1)
    builder.meet('D', 'E', contact=2)
    down = blow_down(builder.build(), 'E')
    assert down.curve('D').self_int == 0
    assert down.curve('D').genus == 1
    cusp = down.points_on('D')[0]
    assert cusp.branches[0].mult == 2


def test_blow_down_rejects_non_exceptional(two_lines):
    with pytest.raises(ValueError):
        blow_down(two_lines, 'L1')
    builder = ConfigBuilder(InvariantLedger.rational(-1))
    builder.add_curve('E', -1, genus=1)
    with pytest.raises(ValueError):
        blow_down(builder.build(), 'E')


def test_blow_down_trace():
    trace = BirationalTrace()
    _, blown = index_two_resolution(3)
    blow_down(blown, 'H1', trace=trace)
    record, config = trace.steps[0]
    assert isinstance(record, BlowDownRecord)
    assert record.curve_id == 'H1'
    assert not config.has_curve('H1')


def _corpus(rng, size):
    """Seeded configurations with a chosen point: fiber loops, ADE-like chains and plane lines."""
    for _ in range(size):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            _, config = fiber_data(f"I{int(rng.integers(1, 8))}")
        elif kind == 1:
            weights = [int(w) for w in rng.integers(2, 5, size=int(rng.integers(2, 7)))]
            config = chain_config(weights)
        else:
            _, config = fiber_data(str(rng.choice(['II', 'III', 'IV', 'I0*', 'IV*'])))
        if not config.points:
            continue
        point = config.points[int(rng.integers(0, len(config.points)))]
        yield config, point.id


def test_blow_up_then_down_round_trip():
    rng = np.random.default_rng(7)
    checked = 0
    for config, point_id in _corpus(rng, 60):
        blown = blow_up(config, point_id, 'Xnew')
        restored = blow_down(blown, 'Xnew')
        assert restored.same_shape(config), f"round trip failed at {point_id}"
        assert restored.signature() == config.signature()
        checked += 1
    assert checked > 40


# ============================================================================
# Contraction
# ============================================================================

@pytest.mark.parametrize('pick', ['leftmost', 'rightmost'])
def test_contract_index_two_chain(pick):
    _, blown = index_two_resolution(10, ledger=InvariantLedger.rational(0))
    result = contract_chain(blown, index_two_chain_ids(10), pick=pick)
    assert result.singularity == BrieskornType(40, 19)
    assert result.label == 'C_{40,19}'
    assert result.weights == (3, 2, 2, 2, 2, 2, 2, 2, 2, 3)
    assert result.blow_downs == 9
    assert result.config.rho_singular == blown.ledger.rho - 9 - 10


@pytest.mark.parametrize('n', range(1, 11))
def test_index_two_chain_contracts_for_every_n(n):
    minimal, blown = index_two_resolution(n, ledger=InvariantLedger.rational(0))
    result = contract_chain(blown, index_two_chain_ids(n))
    assert result.singularity == BrieskornType(4 * n, 2 * n - 1)
    assert result.weights == tuple(index_two_weights(n))
    assert result.blow_downs == n - 1
    assert result.config.ledger == minimal.ledger
    assert result.config.rho_singular == minimal.ledger.rho - n


def test_contract_chain_with_middle_exceptional_curve():
    result = contract_chain(chain_config([4, 1, 4]), ['B1', 'B2', 'B3'])
    assert result.blow_downs == 1
    assert result.weights == (3, 3)
    assert result.singularity == BrieskornType(8, 3)
    assert result.label == 'C_{8,3}'


def test_contract_du_val_chain():
    result = contract_chain(chain_config([2, 2, 2]), ['B1', 'B2', 'B3'])
    assert result.label == 'A3'
    assert result.config.singular_points[0].contracted == 3


def test_contract_single_exceptional_curve():
    builder = ConfigBuilder(InvariantLedger.rational(-1))
    builder.add_curve('E', -1)
    result = contract_chain(builder.build(), ['E'])
    assert result.label == 'smooth point'
    assert result.config.singular_points == ()


def test_contract_rejects_non_linear_chain():
    config = chain_config([2, 2, 2])
    with pytest.raises(ValueError):
        contract_chain(config, ['B1', 'B3'])
    with pytest.raises(ValueError):
        contract_chain(config, ['B1', 'B2', 'B1'])
    with pytest.raises(ValueError):
        contract_chain(config, ['B1'], pick='middle')


def test_contract_rejects_non_contractible_weights():
    builder = ConfigBuilder(InvariantLedger.rational(0))
    builder.add_curve('A', 0)
    with pytest.raises(ValueError):
        contract_chain(builder.build(), ['A'])
