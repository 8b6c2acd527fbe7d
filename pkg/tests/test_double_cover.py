import pytest

from k3calc.dualgraph import ConfigBuilder, SigmaMark, fiber_class_trivial, kodaira_type
from k3calc.double_cover import (
    BranchData,
    CaseLabel,
    CoverCase,
    canonical_resolution,
    case_roles,
    check_fixed_point_rule,
    matches_case,
    pullback_fiber,
    validate_branch,
)
from k3calc.fibration import fiber_data, prepare_fiber


def _plan(registry, name):
    return registry[name].builder(None)


# ============================================================================
# Cases
# ============================================================================

@pytest.mark.parametrize('text, label, n', [
    ('alpha', CaseLabel.ALPHA, None),
    ('β', CaseLabel.BETA, None),
    ('delta(5)', CaseLabel.DELTA, 5),
    ('δ(2)', CaseLabel.DELTA, 2),
    ('epsilon(0)', CaseLabel.EPSILON, 0),
    (' Gamma ', CaseLabel.GAMMA, None),
])
def test_parse_case(text, label, n):
    case = CoverCase.parse(text)
    assert (case.label, case.n) == (label, n)


def test_case_rejects_bad_parameters():
    with pytest.raises(ValueError):
        CoverCase.parse('delta(0)')
    with pytest.raises(ValueError):
        CoverCase.parse('alpha(2)')
    with pytest.raises(ValueError):
        CoverCase.parse('zeta')
    with pytest.raises(ValueError):
        CoverCase(CaseLabel.DELTA)


def test_case_targets():
    assert CoverCase.parse('alpha').target_kodaira == 'IV'
    assert CoverCase.parse('beta').target_kodaira == 'I0*'
    assert CoverCase.parse('gamma').target_kodaira == 'IV*'
    assert CoverCase.parse('delta(4)').target_kodaira == 'I8'
    assert CoverCase.parse('epsilon(3)').source_kodaira == 'I3'
    assert CoverCase.parse('epsilon(0)').target_kodaira == 'smooth'
    assert CoverCase.parse('epsilon(1)').is_multiple
    assert str(CoverCase.parse('δ(7)')) == 'delta(7)'


# ============================================================================
# Fiber pullbacks
# ============================================================================

@pytest.mark.parametrize('text', ['alpha', 'beta', 'gamma'] + [f"delta({n})" for n in range(1, 11)])
def test_prepared_fiber_pulls_back_to_target(text):
    case = CoverCase.parse(text)
    prepared, _ = prepare_fiber(case.source_kodaira)
    assert matches_case(prepared, case)
    upstairs = pullback_fiber(prepared, case)
    assert kodaira_type(upstairs) == case.target_kodaira
    assert all(c.self_int == -2 and c.genus == 0 for c in upstairs.curves)
    assert fiber_class_trivial(upstairs)


def test_alpha_roles():
    prepared, _ = prepare_fiber('II')
    roles = case_roles(prepared, CoverCase.parse('alpha'))
    assert roles == {'F.D1': 'branch', 'F.H1': 'split'}


def test_gamma_fixed_curves():
    prepared, _ = prepare_fiber('IV')
    upstairs = pullback_fiber(prepared, CoverCase.parse('gamma'))
    fixed = [c for c in upstairs.curves if c.sigma_mark == SigmaMark.FIXED]
    assert len(fixed) == 4
    assert upstairs.curve('C(F.D4)').mult == 3
    assert check_fixed_point_rule(upstairs) == []


def test_beta_central_curve_meets_fixed_locus_twice():
    prepared, _ = prepare_fiber('III')
    upstairs = pullback_fiber(prepared, CoverCase.parse('beta'))
    fixed = [c.id for c in upstairs.curves if c.sigma_mark == SigmaMark.FIXED]
    stable = [c for c in upstairs.curves if c.sigma_mark == SigmaMark.STABLE]
    assert len(fixed) == 2
    assert [c.genus for c in stable] == [0]
    assert sum(upstairs.intersection(stable[0].id, f) for f in fixed) == 2
    assert check_fixed_point_rule(upstairs) == []


def test_fixed_point_rule_flags_a_broken_curve():
    prepared, _ = prepare_fiber('III')
    upstairs = pullback_fiber(prepared, CoverCase.parse('beta'))
    central = next(c.id for c in upstairs.curves if c.sigma_mark == SigmaMark.STABLE)
    broken = upstairs.subconfig([c for c in upstairs.curve_ids if c != 'C(F.D1)'])
    problems = check_fixed_point_rule(broken)
    assert len(problems) == 1
    assert central in problems[0]


def test_epsilon_one_gives_swapped_pair():
    _, fiber = fiber_data('I1')
    upstairs = pullback_fiber(fiber, CoverCase.parse('epsilon(1)'))
    assert kodaira_type(upstairs) == 'I2'
    assert {c.sigma_mark for c in upstairs.curves} == {SigmaMark.SWAPPED}
    assert upstairs.curve('G(F1)').partner == "G'(F1)"
    assert upstairs.intersection('G(F1)', "G'(F1)") == 2


@pytest.mark.parametrize('s', range(2, 6))
def test_epsilon_loop_doubles(s):
    _, fiber = fiber_data(f"I{s}")
    assert kodaira_type(pullback_fiber(fiber, CoverCase.parse(f"epsilon({s})"))) == f"I{2 * s}"


def test_epsilon_zero_is_smooth():
    _, fiber = fiber_data('I0')
    upstairs = pullback_fiber(fiber, CoverCase.parse('epsilon(0)'))
    assert kodaira_type(upstairs) == 'smooth'
    assert upstairs.curve('G(F1)').genus == 1


def test_wrong_shape_rejected():
    prepared, _ = prepare_fiber('III')
    assert not matches_case(prepared, CoverCase.parse('alpha'))
    with pytest.raises(ValueError):
        pullback_fiber(prepared, CoverCase.parse('gamma'))


def test_pullback_of_unexpected_type_raises(monkeypatch):
    prepared, _ = prepare_fiber('IV')
    monkeypatch.setattr('k3calc.double_cover.kodaira_type', lambda config: 'I3')
    with pytest.raises(ValueError, match='expected IV\\*'):
        pullback_fiber(prepared, CoverCase.parse('gamma'))


# ============================================================================
# Branch validation and resolution
# ============================================================================

def test_validate_branch_reports_violations(two_lines):
    report = validate_branch(BranchData.from_ids(two_lines, ['L1']))
    assert not report.ok
    assert any('L1' in v for v in report.violations)
    unknown = validate_branch(BranchData(two_lines, frozenset({'X'})))
    assert 'unknown branch curve X' in unknown.violations


def test_annotation_values_checked(two_lines):
    with pytest.raises(ValueError):
        BranchData.from_ids(two_lines, [], annotations={'L1': 'maybe'})


def test_empty_branch_on_rational_surface_is_not_k3():
    _, smooth = fiber_data('I0')
    assert smooth.ledger.rational_surface
    fiber_id = smooth.curve_ids[0]
    branch = BranchData.from_ids(smooth, [], annotations={fiber_id: 'non_split'})
    assert validate_branch(branch).ok

    report = canonical_resolution(branch, strict=False)
    assert report.enriques_case
    assert not report.k3
    assert not report.ok
    assert any('rational surface' in v for v in report.violations)
    with pytest.raises(ValueError, match='rational surface'):
        canonical_resolution(branch)


def test_empty_branch_on_enriques_ledger(registry):
    report = canonical_resolution(_plan(registry, 'lemma1_2_enriques').branch)
    assert report.enriques_case
    assert report.ok
    assert not report.k3
    assert report.euler_upstairs == 24


def test_ramification_pair_is_k3(registry):
    plan = _plan(registry, 'lemma2_4a(1,9)')
    assert validate_branch(plan.branch).ok
    report = canonical_resolution(plan.branch, plan.cases)
    assert report.k3
    assert report.euler_upstairs == 24
    assert report.fixed_locus.m == 10
    assert report.fixed_locus.genera == (0,) * 10
    assert check_fixed_point_rule(report.upstairs) == []


def test_perturbed_ledger_breaks_k3(registry):
    plan = _plan(registry, 'lemma2_4a(1,9)')
    config = plan.branch.config
    perturbed = BranchData.from_ids(
        config.with_changes(ledger=config.ledger.blown_down()), plan.branch.branch_ids, plan.branch.fibers
    )
    report = canonical_resolution(perturbed, plan.cases, strict=False)
    assert report.euler_upstairs == 22
    assert not report.k3
    assert not report.ok
    with pytest.raises(ValueError):
        canonical_resolution(perturbed, plan.cases)


def test_unannotated_curve_needs_a_role(registry):
    plan = _plan(registry, 'lemma2_4a(2,3)')
    builder = ConfigBuilder.from_config(plan.branch.config)
    builder.add_curve('Z', -2)
    config = builder.build()
    bare = BranchData.from_ids(config, plan.branch.branch_ids, plan.branch.fibers)
    with pytest.raises(ValueError, match='annotate'):
        canonical_resolution(bare, plan.cases)

    annotated = BranchData.from_ids(config, plan.branch.branch_ids, plan.branch.fibers, {'Z': 'split'})
    report = canonical_resolution(annotated, plan.cases)
    assert report.k3
    assert report.upstairs.curve("G'(Z)").self_int == -2


def test_missing_case_rejected(registry):
    plan = _plan(registry, 'lemma2_4a(2,3)')
    with pytest.raises(ValueError, match='Missing cover case'):
        canonical_resolution(plan.branch, {'F1': 'delta(2)'})


def test_smooth_fibers_give_elliptic_fixed_curves(registry):
    plan = _plan(registry, 'lemma4_1')
    report = canonical_resolution(plan.branch, plan.cases)
    assert report.k3
    assert report.fixed_locus.genera == (1, 1)
    assert report.upstairs.curve('G(M)').self_int == -2
    assert report.to_dict()['fixed_locus'] == {'m': 2, 'genera': [1, 1]}
