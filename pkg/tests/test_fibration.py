import pytest

from k3calc.dualgraph import fiber_class_trivial, intersection_matrix
from k3calc.fibration import (
    REALIZABLE_CONFIGURATIONS,
    EllipticFibration,
    check_euler_sum,
    dim_anti_bicanonical,
    enumerate_configurations,
    enumerate_pairs,
    fiber_data,
    fiber_shape,
    i_index,
    normalize_type,
    prepare_fiber,
    rank_bound_ok,
    trivial_lattice_rank,
)


@pytest.mark.parametrize('kind, euler, components', [
    ('I0', 0, 1), ('I1', 1, 1), ('I9', 9, 9), ('II', 2, 1), ('III', 3, 2), ('IV', 4, 3),
    ('I0*', 6, 5), ('I4*', 10, 9), ('IV*', 8, 7), ('III*', 9, 8), ('II*', 10, 9),
])
def test_fiber_table(kind, euler, components):
    shape = fiber_shape(kind)
    assert (shape.euler, shape.components) == (euler, components)
    _, config = fiber_data(kind)
    assert len(config.curves) == components


def test_branch_counts():
    assert [fiber_shape(k).branch_count for k in ('II', 'III', 'IV', 'I7')] == [1, 2, 4, 7]


def test_normalize_type():
    assert normalize_type('I_9') == 'I9'
    assert normalize_type('smooth') == 'I0'
    assert normalize_type('iv*') == 'IV*'
    assert normalize_type('I_{2}') == 'I2'
    with pytest.raises(ValueError):
        normalize_type('V')
    assert i_index('I9') == 9
    assert i_index('I2*') is None
    assert i_index('III') is None


def test_fiber_data_intersections():
    _, loop = fiber_data('I9')
    gram = intersection_matrix(loop)
    assert all(gram.at[c, c] == -2 for c in loop.curve_ids)
    assert all(sum(gram.loc[c]) == 0 for c in loop.curve_ids)
    _, star = fiber_data('IV*')
    assert star.curve('F1').mult == 3
    assert sum(c.mult for c in star.curves) == 3 + 2 * 3 + 3


def test_euler_sum():
    assert check_euler_sum(['I9', 'I1', 'I1', 'I1'])
    assert not check_euler_sum(['I10'])
    assert not check_euler_sum([])


def test_rank_bound():
    assert rank_bound_ok(['I9', 'I1', 'I1', 'I1'])
    assert check_euler_sum(['II', 'I10'])
    assert not rank_bound_ok(['II', 'I10'])
    assert trivial_lattice_rank(['I9', 'I1', 'I1', 'I1']) == 10


def test_enumerate_pairs():
    pairs = enumerate_pairs()
    assert len(pairs) == 45
    assert {(1, 9), (2, 8), (5, 5), (9, 1)} <= set(pairs)
    assert (1, 10) not in pairs
    assert (0, 5) not in pairs
    assert all(n1 >= 1 and n2 >= 1 and 2 <= n1 + n2 <= 10 for n1, n2 in pairs)


def test_enumerate_configurations():
    found = {tuple(sorted(c)) for c in enumerate_configurations()}
    for realizable in REALIZABLE_CONFIGURATIONS:
        assert tuple(sorted(realizable)) in found
    assert tuple(sorted(['II', 'I10'])) not in found
    assert all(check_euler_sum(c) and rank_bound_ok(c) for c in found)


@pytest.mark.parametrize('kind, blow_ups', [('II', 1), ('III', 2), ('IV', 4), ('I1', 1), ('I5', 5), ('I9', 9)])
def test_prepare_fiber_counts(kind, blow_ups):
    prepared, count = prepare_fiber(kind)
    assert count == blow_ups
    assert prepared.ledger.k_squared == -blow_ups
    assert fiber_class_trivial(prepared)


def test_prepare_iii_shape():
    prepared, _ = prepare_fiber('III', prefix='F')
    assert sorted(c.self_int for c in prepared.curves) == [-4, -4, -2, -1]
    assert prepared.curve('F.H1').self_int == -1
    assert prepared.curve('F.H1').mult == 4
    assert prepared.curve('F.H2').mult == 2


def test_prepare_iv_shape():
    prepared, _ = prepare_fiber('IV', prefix='F')
    assert prepared.curve('F.D4').self_int == -4
    assert prepared.curve('F.D4').mult == 3
    assert sorted(c.mult for c in prepared.curves) == [1, 1, 1, 3, 4, 4, 4]
    assert all(prepared.intersection('F.D4', f"F.H{j}") == 1 for j in (1, 2, 3))


def test_prepare_i_n_loop():
    prepared, _ = prepare_fiber('I4', prefix='F')
    for j in range(1, 5):
        assert prepared.curve(f"F.D{j}").self_int == -4
        assert prepared.curve(f"F.H{j}").mult == 2
    assert prepared.intersection('F.D1', 'F.H1') == 1
    assert prepared.intersection('F.H1', 'F.D2') == 1
    assert prepared.intersection('F.D4', 'F.H4') == 1


def test_prepare_fiber_rejects_unsupported():
    with pytest.raises(ValueError):
        prepare_fiber('I0*')
    with pytest.raises(ValueError):
        prepare_fiber('I0')


def test_dim_anti_bicanonical():
    assert dim_anti_bicanonical(1) == 3
    assert dim_anti_bicanonical(4) == 12
    with pytest.raises(ValueError):
        dim_anti_bicanonical(0)


def test_elliptic_fibration():
    fibration = EllipticFibration((('F1', 'I_9'), ('F2', 'I1'), ('F3', 'I1'), ('F4', 'I1'), ('F5', 'smooth')))
    assert fibration.types['F1'] == 'I9'
    assert fibration.singular_types() == ['I9', 'I1', 'I1', 'I1']
    assert fibration.is_complete()
    assert fibration.rank_bound_ok()
    with pytest.raises(ValueError):
        EllipticFibration((('F1', 'I9'), ('F1', 'I1')))
    with pytest.raises(ValueError):
        EllipticFibration((('F1', 'IV'),), multiple='F1')
    assert EllipticFibration((('F1', 'I2'),), multiple='F1').multiple == 'F1'


def test_i_type_pairs_are_admissible():
    pairs = set(enumerate_pairs())
    for configuration in enumerate_configurations():
        indices = [i_index(t) for t in configuration]
        loops = [n for n in indices if n]
        for a in range(len(loops)):
            for b in range(a + 1, len(loops)):
                assert (loops[a], loops[b]) in pairs
