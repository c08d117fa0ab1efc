import pytest
from hypothesis import given, strategies as st

from exceptions import (
    DegenerateDenominatorError,
    EvaluationError,
    QuantumNumberError,
    RotorParameterError,
)
from qalgebra import Deformation
from spectrum import (
    Orbital,
    RotorParameters,
    as_orbital,
    epsilon_key,
    h_q_eigenvalue,
    novaro_h_eigenvalue,
    novaro_key,
    spectral_energy,
)

orbitals = st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.builds(Orbital, st.just(n), st.integers(min_value=0, max_value=min(n - 1, 3)))
)

ALL_TO_EIGHT = [Orbital(n, l) for n in range(1, 9) for l in range(n)]
UP_TO_F = [o for o in ALL_TO_EIGHT if o.l <= 3]


class TestOrbital:
    def test_label_and_capacity(self):
        assert Orbital(3, 2).label == "3d"
        assert Orbital(3, 2).capacity == 10
        assert Orbital(4, 3).capacity == 14
        assert str(Orbital(1, 0)) == "1s"

    @pytest.mark.parametrize("label,expected", [("1s", (1, 0)), ("4f", (4, 3)), (" 5d ", (5, 2)), ("8k", (8, 7))])
    def test_parse(self, label, expected):
        assert Orbital.parse(label) == Orbital(*expected)

    @pytest.mark.parametrize("label", ["2d", "0s", "3x", "d3", "", "3 d 1"])
    def test_parse_rejects(self, label):
        with pytest.raises(QuantumNumberError):
            Orbital.parse(label)

    @pytest.mark.parametrize("n,l", [(0, 0), (2, 2), (3, -1), (2.0, 0), (True, 0)])
    def test_rejects_bad_quantum_numbers(self, n, l):
        with pytest.raises(QuantumNumberError):
            Orbital(n, l)

    def test_orders_on_n_then_l(self):
        assert sorted([Orbital(3, 0), Orbital(2, 1), Orbital(2, 0)]) == [Orbital(2, 0), Orbital(2, 1), Orbital(3, 0)]

    def test_as_orbital_accepts_labels(self):
        o = Orbital(4, 1)
        assert as_orbital(o) is o
        assert as_orbital("4p") == o


class TestEnergyKey:
    def test_d_shell_undeformed(self):
        assert epsilon_key("3d", Deformation(1.0)).value == pytest.approx(17.0, abs=1e-12)

    def test_d_shell_at_neutral_atom_q(self):
        assert epsilon_key("3d", Deformation(0.85)).value == pytest.approx(18.96772, abs=1e-4)

    def test_hydrogen_point_collapses_to_n_squared(self):
        d = Deformation(1.8)
        for label, n in (("1s", 1), ("2s", 2), ("2p", 2), ("3d", 3), ("4f", 4)):
            assert epsilon_key(label, d).value == pytest.approx(n * n, abs=1e-9)

    @given(orbitals, st.floats(min_value=0.3, max_value=2.0))
    def test_s_shells_are_n_squared(self, o, q):
        s = Orbital(o.n, 0)
        assert epsilon_key(s, Deformation(q)).value == s.n ** 2

    def test_key_carries_orbital(self):
        key = epsilon_key("4s", Deformation(1.2))
        assert key.orbital == Orbital(4, 0)

    @given(orbitals, st.floats(min_value=0.3, max_value=3.0))
    def test_matches_explicit_rows(self, o, q):
        a = 3 - 5 / 3 * q
        rows = {
            0: 0.0,
            1: a * (q + 1 / q),
            2: a * (q + 1 / q) * (q ** 2 + 1 + q ** -2),
            3: a * (q ** 2 + 1 + q ** -2) * (q ** 3 + q + q ** -1 + q ** -3),
        }
        expected = o.n ** 2 + rows[o.l]
        assert epsilon_key(o, Deformation(q)).value == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestNovaro:
    @pytest.mark.parametrize("o", ALL_TO_EIGHT, ids=lambda o: o.label)
    def test_undeformed_limit(self, o):
        assert h_q_eigenvalue(o, Deformation(1.0)) == pytest.approx(novaro_h_eigenvalue(o, 4 / 3), rel=1e-12)

    def test_key(self):
        assert novaro_key("3d", 4 / 3) == pytest.approx(17.0)
        assert novaro_key(Orbital(2, 0), 5.0) == 4.0

    @given(orbitals, orbitals, st.floats(min_value=-1.0, max_value=3.0), st.floats(min_value=0.1, max_value=5.0))
    def test_hamiltonian_orders_like_key(self, a, b, alpha_const, inertia):
        p = RotorParameters(inertia=inertia)
        key_diff = novaro_key(a, alpha_const) - novaro_key(b, alpha_const)
        h_diff = novaro_h_eigenvalue(a, alpha_const, p) - novaro_h_eigenvalue(b, alpha_const, p)
        assert h_diff == pytest.approx(key_diff / (2 * inertia), abs=1e-9)


class TestSpectralEnergy:
    def test_ground_state(self):
        assert spectral_energy("1s", Deformation(1.2)) == pytest.approx(-13.6)

    def test_second_shell(self):
        assert spectral_energy("2s", Deformation(0.85)) == pytest.approx(-3.4)
        assert spectral_energy("2p", Deformation(1.8)) == pytest.approx(-3.4, abs=1e-9)

    @given(orbitals, st.floats(min_value=0.3, max_value=2.0))
    def test_h_q_is_shifted_key(self, o, q):
        d = Deformation(q)
        assert h_q_eigenvalue(o, d) == pytest.approx(epsilon_key(o, d).value - 1.0, abs=1e-9)

    @given(orbitals, orbitals, st.floats(min_value=0.3, max_value=1.8))
    def test_energy_monotone_in_key(self, a, b, q):
        d = Deformation(q)
        ka, kb = epsilon_key(a, d).value, epsilon_key(b, d).value
        if ka < kb - 1e-9:
            assert spectral_energy(a, d) < spectral_energy(b, d)
        elif ka > kb + 1e-9:
            assert spectral_energy(a, d) > spectral_energy(b, d)

    @pytest.mark.parametrize("q", [0.85, 1.0, 1.2, 1.7])
    @given(st.floats(min_value=-1e3, max_value=-1e-3), st.floats(min_value=1e-2, max_value=1e2))
    def test_energy_and_key_agree_for_any_rotor(self, q, ground_energy, inertia):
        d = Deformation(q)
        p = RotorParameters(inertia=inertia, ground_energy=ground_energy)
        keys = {o: epsilon_key(o, d).value for o in UP_TO_F}
        energies = {o: spectral_energy(o, d, p) for o in UP_TO_F}
        for i, a in enumerate(UP_TO_F):
            for b in UP_TO_F[i + 1:]:
                if abs(keys[a] - keys[b]) <= 1e-9 * max(keys[a], keys[b]):
                    continue
                assert (keys[a] < keys[b]) == (energies[a] < energies[b])

    @pytest.mark.parametrize("q", [0.85, 1.0, 1.2, 1.7])
    @pytest.mark.parametrize("inertia", [0.01, 0.5, 3.0, 40.0])
    def test_ordering_independent_of_inertia(self, q, inertia):
        d = Deformation(q)
        reference = RotorParameters()
        p = RotorParameters(inertia=inertia)
        by_default = sorted(ALL_TO_EIGHT, key=lambda o: (h_q_eigenvalue(o, d, reference), o))
        by_inertia = sorted(ALL_TO_EIGHT, key=lambda o: (h_q_eigenvalue(o, d, p), o))
        assert by_inertia == by_default

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateDenominatorError):
            spectral_energy("2p", Deformation(5.0))

    def test_degenerate_denominator_is_evaluation_error(self):
        with pytest.raises(EvaluationError):
            spectral_energy("2p", Deformation(5.0))

    @pytest.mark.parametrize("inertia,energy", [(0.0, -13.6), (-1.0, -13.6), (0.5, 0.0), (0.5, 2.0)])
    def test_rotor_validation(self, inertia, energy):
        with pytest.raises(RotorParameterError):
            RotorParameters(inertia=inertia, ground_energy=energy)

    def test_custom_rotor(self):
        p = RotorParameters(inertia=1.0, ground_energy=-1.0)
        # h(2s) = 3 / 2
        assert spectral_energy("2s", Deformation(1.0), p) == pytest.approx(-1.0 / 2.5)
