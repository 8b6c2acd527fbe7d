import json

import pytest

from k3calc.scenarios import (
    MUTATIONS,
    Provenance,
    build_registry,
    example2_8_fibers,
    list_scenarios,
    registry_coverage,
    run_scenario,
)

REGISTRY = build_registry()


@pytest.mark.parametrize('name', list(REGISTRY))
def test_scenario_passes(name, verified):
    reports, _ = verified
    report = reports[name]
    assert report.error is None, report.error
    assert report.passed, [(f.name, f.expected, f.actual) for f in report.failures]


@pytest.mark.parametrize('name, mutation', [
    (scenario.name, mutation) for scenario in REGISTRY.values() for mutation in scenario.mutations
])
def test_mutation_is_detected(name, mutation, registry):
    report = run_scenario(name, mutation=mutation, registry=registry)
    assert not report.passed
    assert any(mutation in note for note in report.notes) or report.error is not None


def test_registry_size(registry):
    assert len(registry) >= 10
    assert sum(name.startswith('lemma2_4a(') for name in registry) == 25
    assert 'lemma2_4a(1,9)' in registry
    assert 'lemma2_4a(9,1)' not in registry
    assert all(set(s.mutations) <= set(MUTATIONS) for s in registry.values())


def test_fixed_curve_counts_cover_one_to_ten(registry):
    assert registry_coverage(registry) >= set(range(1, 11))


def test_list_scenarios():
    names = [name for name, _ in list_scenarios()]
    assert names == list(REGISTRY)
    assert all(description for _, description in list_scenarios())


def test_duplicate_names_rejected():
    config = {'scenarios': {'lemma5_1_s': [1, 1]}}
    with pytest.raises(ValueError, match='Duplicate'):
        build_registry(config)


def test_unknown_scenario_and_mutation(registry):
    with pytest.raises(ValueError):
        run_scenario('no_such_scenario', registry=registry)
    with pytest.raises(ValueError):
        run_scenario('lemma4_1', mutation='shuffle', registry=registry)


def test_report_values(verified):
    report = verified[0]['lemma2_4a(2,8)']
    assert report.value('m') == 10
    assert report.value('euler_X') == 24
    assert report.value('upstairs_fibers') == {'F1': 'I4', 'F2': 'I16'}
    provenance = {r.name: r.provenance for r in report.results}
    assert provenance['rho_S'] == Provenance.STATED
    assert provenance['k_squared'] == Provenance.DERIVED


def test_report_is_json_serializable(verified):
    report = verified[0]['lemma3_2_n9']
    document = json.loads(json.dumps(report.to_dict()))
    assert document['scenario'] == 'lemma3_2_n9'
    assert document['passed'] is True
    assert all(isinstance(e['provenance'], str) for e in document['expectations'])


def test_contraction_values(verified):
    report = verified[0]['lemma3_2_n9']
    assert report.value('rho_singular') == 1
    assert len(report.artifacts['contracted'].singular_points) == 1


@pytest.mark.parametrize('name, fibers', [
    ('example2_8(II,I9)', {'F1': 'IV', 'F2': 'I18'}),
    ('example2_8(III,I8)', {'F1': 'I0*', 'F2': 'I16'}),
])
def test_chain_through_additive_fiber(name, fibers, verified):
    report = verified[0][name]
    assert report.value('upstairs_fibers') == fibers
    assert report.value('singularities') == ('C_{40,19}',)
    assert report.value('k_squared_contracted') == 0
    assert len(report.artifacts['contracted'].singular_points) == 1


def test_chain_rejects_wrong_total():
    with pytest.raises(ValueError, match='expected 10'):
        example2_8_fibers('III', 'I9')
    with pytest.raises(ValueError, match='linear chain'):
        example2_8_fibers('IV', 'I6')


def test_verify_all_summary(verified):
    reports, summary = verified
    assert len(reports) == len(REGISTRY)
    assert list(summary.columns) == ['scenario', 'expectations', 'passed', 'failed', 'm', 'rho_S', 'euler_X']
    assert int(summary['failed'].sum()) == 0
    assert (summary['expectations'] == summary['passed']).all()
