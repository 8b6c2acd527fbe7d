import json

import pytest

from k3calc.birational import BirationalTrace, blow_up, contract_chain
from k3calc.codec import config_from_dict, config_to_dict, emit, parse_json, trace_to_json
from k3calc.cyclic_sing import chain_config
from k3calc.double_cover import CoverCase, pullback_fiber
from k3calc.dualgraph import ConfigBuilder, InvariantLedger
from k3calc.fibration import fiber_data, prepare_fiber


def _samples():
    _, cusp = fiber_data('II')
    prepared, _ = prepare_fiber('IV')
    _, loop = fiber_data('I1')
    swapped = pullback_fiber(loop, CoverCase.parse('epsilon(1)'))
    contracted = contract_chain(chain_config([2, 2, 2]), ['B1', 'B2', 'B3']).config
    return [cusp, prepared, swapped, contracted]


@pytest.mark.parametrize('index', range(4))
def test_json_text_is_stable(index):
    config = _samples()[index]
    text = emit(config)
    assert emit(parse_json(text)) == text
    assert parse_json(text).same_shape(config)


def test_json_ignores_construction_order():
    first = ConfigBuilder(InvariantLedger.rational(0))
    first.add_curve('A', -2).add_curve('B', -2)
    first.meet('A', 'B', point_id='x')
    second = ConfigBuilder(InvariantLedger.rational(0))
    second.add_curve('B', -2).add_curve('A', -2)
    second.meet('B', 'A', point_id='x')
    assert emit(first.build()) == emit(second.build())


def test_json_ignores_branch_order_inside_a_point():
    def build(branches, contacts):
        builder = ConfigBuilder(InvariantLedger.rational(0))
        builder.add_curve('A', 0, genus=1).add_curve('B', -1)
        builder.add_point('x', branches, contacts)
        return builder.build()

    # B tangent to one branch of the node of A, transversal to the other
    first = build(['A', 'A', 'B'], {(0, 1): 1, (0, 2): 1, (1, 2): 2})
    second = build(['B', 'A', 'A'], {(0, 1): 2, (0, 2): 1, (1, 2): 1})
    third = build(['A', 'B', 'A'], {(0, 1): 2, (0, 2): 1, (1, 2): 1})
    text = emit(first)
    assert emit(second) == text
    assert emit(third) == text
    point = json.loads(text)['points'][0]
    assert [b['curve'] for b in point['branches']] == ['A', 'A', 'B']
    assert all(c['pair'][0] < c['pair'][1] for c in point['contacts'])
    assert emit(parse_json(text)) == text


def test_json_keeps_involution_marks():
    _, loop = fiber_data('I1')
    upstairs = pullback_fiber(loop, CoverCase.parse('epsilon(1)'))
    document = json.loads(emit(upstairs))
    marks = {c['id']: c['sigma_mark'] for c in document['curves']}
    assert marks['G(F1)'] == "swapped:G'(F1)"
    assert parse_json(emit(upstairs)).curve("G'(F1)").partner == 'G(F1)'


def test_singular_points_survive():
    config = _samples()[3]
    restored = parse_json(emit(config))
    assert [s.label for s in restored.singular_points] == ['A3']


def test_dot_has_one_node_per_curve():
    prepared, _ = prepare_fiber('III')
    text = emit(prepared, 'dot')
    assert text.startswith('graph config {')
    node_lines = [line for line in text.splitlines() if '[label=' in line and '--' not in line]
    assert len(node_lines) == len(prepared.curves)
    assert sum('--' in line for line in text.splitlines()) == len(prepared.edges)


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(chain_config([2]), 'yaml')


def test_missing_field_is_value_error():
    document = config_to_dict(chain_config([2, 3]))
    del document['ledger']
    with pytest.raises(ValueError, match='ledger'):
        config_from_dict(document)
    with pytest.raises(ValueError):
        config_from_dict({'curves': [{'self_int': -2}], 'ledger': {}})


def test_trace_to_json(two_lines):
    trace = BirationalTrace()
    blow_up(two_lines, 'q', 'E', trace=trace)
    steps = json.loads(trace_to_json(trace))
    assert len(steps) == 1
    assert steps[0]['kind'] == 'BlowUpRecord'
    assert steps[0]['record']['new_curve_id'] == 'E'
    assert {c['id'] for c in steps[0]['config']['curves']} == {'L1', 'L2', 'E'}
