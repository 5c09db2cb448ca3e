from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from teleportsim.bell import make_bell_family, weyl_unitary
from teleportsim.eavesdrop import (
    NullBranchError,
    analyze_eavesdropping,
    conditional_fidelity,
    conditional_output,
    distinguishability,
    eavesdrop_operator,
    joint_probability,
    joint_probability_table,
    marginal_l,
    marginal_m,
    projective_case_analysis,
    sequential_decomposition_check,
    total_fidelity,
)
from teleportsim.effects import (
    EffectOperator,
    MeasurementFamily,
    make_measurement_family,
    strength_family,
)
from teleportsim.engine import make_scenario, run_oracle
from teleportsim.linalg import basis_state, dagger, uniform_state
from teleportsim.sampling import random_state, random_unitary

from oracles import closed_form_uniform_fidelity


def tapped(dim, state, theta, basis=None, u0=None, bell=None):
    return make_scenario(
        dim, state, bell=bell, u0=u0, effect_r=strength_family(dim, theta, basis)
    )


def test_operator_is_conjugated_projector_at_full_strength():
    config = tapped(2, uniform_state(2), 1.0)
    for a in range(2):
        for b in range(2):
            u_m = weyl_unitary(2, a, b)
            for l in range(2):
                proj = np.zeros((2, 2), dtype=complex)
                proj[l, l] = 1.0
                assert_allclose(
                    eavesdrop_operator(config, l, (a, b)),
                    0.5 * u_m @ proj @ dagger(u_m),
                    atol=1e-12,
                )


def test_operator_uses_mirrored_branch_for_rotated_reference():
    rng = np.random.default_rng(19)
    u0 = random_unitary(3, rng)
    config = tapped(3, random_state(3, rng), 0.8, u0=u0)
    branch = np.asarray(config.effect_r.branches[1].matrix)
    u_m = weyl_unitary(3, 2, 1)
    expected = (dagger(u0) @ branch @ u0).T
    expected = u_m @ expected @ dagger(u_m) / 3.0
    assert_allclose(eavesdrop_operator(config, 1, (2, 1)), expected, atol=1e-12)


def test_trivial_tap_probabilities_are_flat():
    # at zero strength every (l, m) cell carries weight / (dim^2 * dim)
    config = tapped(2, uniform_state(2), 0.0)
    for l in range(2):
        for a in range(2):
            for b in range(2):
                assert joint_probability(config, l, (a, b)) == pytest.approx(1 / 8, abs=1e-12)


def test_full_strength_probabilities_follow_the_shift():
    config = tapped(2, basis_state(2, 0), 1.0)
    assert joint_probability(config, 0, (0, 0)) == pytest.approx(0.25, abs=1e-12)
    assert joint_probability(config, 1, (0, 0)) == pytest.approx(0.0, abs=1e-12)


@given(
    st.integers(min_value=2, max_value=4),
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=0, max_value=300),
)
@settings(max_examples=30, deadline=None)
def test_joint_probabilities_match_oracle_records(dim, theta, seed):
    rng = np.random.default_rng(seed)
    config = tapped(
        dim, random_state(dim, rng), theta,
        basis=random_unitary(dim, rng), u0=random_unitary(dim, rng),
    )
    table = joint_probability_table(config)
    for record in run_oracle(config):
        assert table[(record.l, record.m)] == pytest.approx(record.probability, abs=1e-10)


def test_conditional_output_matches_oracle_branch():
    rng = np.random.default_rng(29)
    config = tapped(3, random_state(3, rng), 0.6, u0=random_unitary(3, rng))
    records = {(r.l, r.m): r for r in run_oracle(config)}
    for (l, m), record in records.items():
        out = conditional_output(config, l, m)
        assert_allclose(out, record.output, atol=1e-10)


def test_conditional_output_raises_on_dead_branch():
    config = tapped(2, basis_state(2, 0), 1.0)
    with pytest.raises(NullBranchError):
        conditional_output(config, 1, (0, 0))
    with pytest.raises(NullBranchError):
        conditional_fidelity(config, 1, (0, 0))


def test_live_branch_fidelity_at_full_strength():
    # the uniform input collapses to a basis state on every live branch
    config = tapped(2, uniform_state(2), 1.0)
    for l in range(2):
        for a in range(2):
            for b in range(2):
                assert conditional_fidelity(config, l, (a, b)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize(
    "theta", [0.0, 0.25, 0.5, 0.75, 1.0]
)
def test_total_fidelity_closed_form(theta):
    config = tapped(2, uniform_state(2), theta)
    assert total_fidelity(config) == pytest.approx(
        closed_form_uniform_fidelity(theta), abs=1e-12
    )


@given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=2, max_value=5))
@settings(max_examples=40, deadline=None)
def test_basis_eigenstate_keeps_unit_fidelity(theta, dim):
    config = tapped(dim, basis_state(dim, dim - 1), theta)
    assert total_fidelity(config) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("dim", [2, 3])
def test_total_fidelity_decreases_with_strength(dim):
    values = [
        total_fidelity(tapped(dim, uniform_state(dim), theta))
        for theta in np.linspace(0, 1, 11)
    ]
    assert values[0] == pytest.approx(1.0, abs=1e-10)
    for earlier, later in zip(values, values[1:]):
        assert later <= earlier + 1e-12


def test_marginals_for_strength_family():
    config = tapped(2, random_state(2, np.random.default_rng(3)), 0.8)
    p_l = marginal_l(config)
    assert p_l[0] == pytest.approx(0.5, abs=1e-12)
    assert p_l[1] == pytest.approx(0.5, abs=1e-12)
    p_m = marginal_m(config)
    for value in p_m.values():
        assert value == pytest.approx(0.25, abs=1e-12)


def test_tap_marginal_tracks_branch_traces_not_input():
    e0 = np.diag([1.0, np.sqrt(0.5)]).astype(complex)
    e1 = np.diag([0.0, np.sqrt(0.5)]).astype(complex)
    family = make_measurement_family([e0, e1])
    rng = np.random.default_rng(7)
    for _ in range(5):
        config = make_scenario(2, random_state(2, rng), effect_r=family)
        p_l = marginal_l(config)
        assert p_l[0] == pytest.approx(0.75, abs=1e-12)
        assert p_l[1] == pytest.approx(0.25, abs=1e-12)


def test_bell_marginal_respects_outcome_weights():
    outcomes = [
        ((a, b, c), weyl_unitary(2, a, b), 0.5)
        for a in range(2) for b in range(2) for c in (0, 1)
    ]
    family = make_bell_family(2, outcomes)
    config = tapped(2, uniform_state(2), 0.4, bell=family)
    for value in marginal_m(config).values():
        assert value == pytest.approx(0.5 / 4, abs=1e-12)


def test_sequential_decompositions_stay_maximally_mixed():
    rng = np.random.default_rng(43)
    for dim in (2, 3):
        for theta in (0.0, 0.5, 1.0):
            config = tapped(
                dim, random_state(dim, rng), theta,
                basis=random_unitary(dim, rng), u0=random_unitary(dim, rng),
            )
            report = sequential_decomposition_check(config)
            assert report.branch_deviation < 1e-12
            assert report.grouped_deviation < 1e-12


def test_sequential_decomposition_flags_broken_family():
    intact = strength_family(2, 0.6)
    branches = list(intact.branches)
    branches[0] = EffectOperator(
        matrix=np.asarray(branches[0].matrix) * 1.05, kind="measurement-branch", label=0
    )
    broken = MeasurementFamily(dim=2, branches=tuple(branches))
    config = make_scenario(2, uniform_state(2), effect_r=broken)
    report = sequential_decomposition_check(config)
    assert report.branch_deviation > 1e-3
    assert report.grouped_deviation > 1e-3


def test_projective_analysis_reproduces_joint_table():
    rng = np.random.default_rng(47)
    u0 = random_unitary(3, rng)
    config = tapped(3, random_state(3, rng), 1.0, u0=u0)
    report = projective_case_analysis(config)
    table = joint_probability_table(config)
    for key, value in report.probabilities.items():
        assert value == pytest.approx(table[key], abs=1e-10)


def test_projective_analysis_observable_without_rotation():
    config = tapped(3, uniform_state(3), 1.0)
    report = projective_case_analysis(config)
    # identity reference rotation: the measured observable at the identity
    # outcome is the label operator in the tap basis
    assert_allclose(report.observables[(0, 0)], np.diag([0.0, 1.0, 2.0]), atol=1e-12)
    u_m = weyl_unitary(3, 1, 2)
    assert_allclose(
        report.observables[(1, 2)], u_m @ np.diag([0.0, 1.0, 2.0]) @ dagger(u_m), atol=1e-12
    )


def test_projective_analysis_rejects_partial_strength():
    config = tapped(2, uniform_state(2), 0.5)
    with pytest.raises(ValueError, match="rank-one projector"):
        projective_case_analysis(config)


def test_distinguishability_basis_pair_scales_with_strength():
    for theta in (0.0, 0.6, 1.0):
        config = tapped(2, basis_state(2, 0), theta)
        pair = [basis_state(2, 0), basis_state(2, 1)]
        advantage = distinguishability(config, pair)
        assert advantage[0, 1] == pytest.approx(theta / 2, abs=1e-12)
        assert advantage[1, 0] == advantage[0, 1]
        assert advantage[0, 0] == 0.0


def test_distinguishability_blind_to_conjugate_basis():
    config = tapped(2, uniform_state(2), 1.0)
    plus = uniform_state(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    advantage = distinguishability(config, [plus, minus])
    assert advantage[0, 1] == pytest.approx(0.0, abs=1e-12)


def test_distinguishability_needs_two_inputs():
    config = tapped(2, uniform_state(2), 0.5)
    with pytest.raises(ValueError, match="at least two"):
        distinguishability(config, [uniform_state(2)])


def test_analysis_report_is_self_consistent():
    rng = np.random.default_rng(59)
    config = tapped(3, random_state(3, rng), 0.35, u0=random_unitary(3, rng))
    report = analyze_eavesdropping(config)
    assert len(report.entries) == 3 * 9
    table = joint_probability_table(config)
    for entry in report.entries:
        assert entry.probability == pytest.approx(table[(entry.l, entry.m)], abs=1e-12)
        assert entry.hermiticity_deviation < 1e-12
    assert sum(report.p_l.values()) == pytest.approx(1.0, abs=1e-12)
    assert sum(report.p_m.values()) == pytest.approx(1.0, abs=1e-12)
    assert report.total_fidelity == pytest.approx(total_fidelity(config), abs=1e-12)
    assert report.max_hermiticity_deviation < 1e-12


def test_analysis_marks_dead_branches_with_no_fidelity():
    config = tapped(2, basis_state(2, 0), 1.0)
    report = analyze_eavesdropping(config)
    dead = [e for e in report.entries if e.probability < 1e-14]
    live = [e for e in report.entries if e.probability >= 1e-14]
    assert dead and all(e.fidelity is None for e in dead)
    assert live and all(e.fidelity == pytest.approx(1.0, abs=1e-12) for e in live)


def test_tap_functions_require_measurement_family():
    config = make_scenario(2, uniform_state(2))
    with pytest.raises(ValueError, match="no measurement family"):
        total_fidelity(config)
