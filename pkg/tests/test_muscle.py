import math

import pytest
from hypothesis import given, strategies as st

from reachsat.muscle import (
    FORCE_EXPONENT,
    MotorUnit,
    MuscleSpec,
    advance,
    drive_constant,
    integrate_activation,
    muscle,
    recruit,
    rise_rate_of,
    steady_activation,
    step_activation,
    unit_force,
)

STRENGTHS = (0.15, 0.5, 0.85)


class TestDriveConstant:
    def test_saturates_at_strength(self):
        # fixed point a* = f/(f+1) must satisfy (a*)^q = F
        for F in STRENGTHS:
            f = drive_constant(F)
            assert (f / (f + 1)) ** 3 == pytest.approx(F, rel=1e-12)

    def test_rejects_out_of_range(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                drive_constant(bad)

    def test_rise_rate_strictly_increasing(self):
        rates = [rise_rate_of(F) for F in STRENGTHS]
        assert rates == sorted(rates)
        assert len(set(rates)) == len(rates)


class TestIntegration:
    @pytest.mark.parametrize("F", STRENGTHS)
    def test_converges_to_fixed_point(self, F):
        unit = MotorUnit(F, recruited=True)
        dt = 1e-3
        for _ in range(int(30 / dt)):
            unit = integrate_activation(unit, dt, unit.drive)
        assert unit.force() == pytest.approx(F, abs=1e-6)

    @pytest.mark.parametrize("F", STRENGTHS)
    def test_matches_closed_form_rise(self, F):
        unit = MotorUnit(F, recruited=True)
        dt = 1e-3
        for k in range(1000):
            unit = integrate_activation(unit, dt, unit.drive)
        assert unit.activation == pytest.approx(
            step_activation(F, 1.0), abs=1e-10
        )

    def test_release_decay_is_exact_exponential(self):
        # da/dt = -a under zero drive: a(t) = a0 * e^(-t)
        unit = MotorUnit(0.85, activation=0.7)
        dt = 1e-3
        for k in range(2000):
            unit = integrate_activation(unit, dt, 0.0)
        assert unit.activation == pytest.approx(0.7 * math.exp(-2.0), abs=1e-8)

    def test_rejects_bad_dt_and_drive(self):
        unit = MotorUnit(0.5)
        with pytest.raises(ValueError):
            integrate_activation(unit, 0.0, 1.0)
        with pytest.raises(ValueError):
            integrate_activation(unit, 1e-3, -1.0)


class TestClosedForms:
    def test_steady_activation(self):
        assert steady_activation(0.85) == pytest.approx(0.85 ** (1 / 3))

    def test_unit_force_continuous_at_release(self):
        lhs = unit_force(0.5, 2.0, 2.0)
        rhs = unit_force(0.5, 2.0, 2.0 + 1e-12)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_unit_force_zero_before_start(self):
        assert unit_force(0.5, 2.0, 0.0) == 0.0

    @given(
        F=st.floats(0.05, 0.95),
        tau=st.floats(0.1, 10),
        dt_after=st.floats(0.0, 5.0),
    )
    def test_force_decays_as_qth_power(self, F, tau, dt_after):
        at_release = unit_force(F, tau, tau)
        later = unit_force(F, tau, tau + dt_after)
        assert later == pytest.approx(
            at_release * math.exp(-FORCE_EXPONENT * dt_after), rel=1e-9
        )


class TestRecruitment:
    def test_muscle_sorts_ascending(self):
        spec = muscle(0.85, 0.15)
        assert [u.strength for u in spec.units] == [0.15, 0.85]

    def test_spec_rejects_unsorted(self):
        with pytest.raises(ValueError):
            MuscleSpec((MotorUnit(0.85), MotorUnit(0.15)))

    def test_recruits_weakest_first(self):
        spec = recruit(muscle(0.85, 0.15, 0.5), 2)
        assert [u.recruited for u in spec.units] == [True, True, False]

    def test_recruit_bounds(self):
        with pytest.raises(ValueError):
            recruit(muscle(0.5), 2)

    def test_discrete_steady_force_levels(self):
        # m units -> m+1 steady-state totals, one per recruitment count
        spec = muscle(0.85, 0.15)
        levels = []
        for n in range(3):
            s = advance(recruit(spec, n), 1e-2, steps=3000)
            levels.append(s.total_force())
        assert levels[0] == pytest.approx(0.0, abs=1e-9)
        assert levels[1] == pytest.approx(0.15, abs=1e-4)
        assert levels[2] == pytest.approx(1.0, abs=1e-4)

    def test_max_strength(self):
        assert muscle(0.85, 0.15).max_strength == pytest.approx(1.0)
