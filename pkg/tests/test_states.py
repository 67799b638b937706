import json
import math

import numpy as np
import pytest

from entropic_witness import DomainError
from entropic_witness.states import (
    CanonicalBloch,
    EwlSpec,
    average_fidelity,
    bloch_decompose,
    bloch_reconstruct,
    chsh_parameter,
    concurrence,
    conditional_entropy,
    distillable_lower_bound,
    ewl_state,
    from_canonical,
    is_physical,
    octahedron_vertex_state,
    partial_trace,
    state_from_dict,
    state_to_dict,
    teleportation_N,
    von_neumann_entropy,
)
from oracles import I2, SX, SY, SZ, entropy_bits, ket, marginal, proj, trace_pauli, wootters_direct

CHSH_EXAMPLE = CanonicalBloch(r=(0, 0, 0.25), s=(0, 0, 0.25), v=(0.95, -0.25, 0.30))


class TestFromCanonical:
    def test_zero_is_maximally_mixed(self, mixed):
        np.testing.assert_allclose(from_canonical(CanonicalBloch((0, 0, 0), (0, 0, 0), (0, 0, 0))), mixed, atol=1e-15)

    def test_singlet_vertex(self, singlet):
        rho = from_canonical(CanonicalBloch((0, 0, 0), (0, 0, 0), (-1, -1, -1)))
        np.testing.assert_allclose(rho, singlet, atol=1e-15)

    def test_chsh_example_is_physical(self):
        rho = from_canonical(CHSH_EXAMPLE)
        assert is_physical(rho)
        # canonical form is the Bloch expansion with diagonal correlations
        expected = np.eye(4) + 0.25 * np.kron(SZ, I2) + 0.25 * np.kron(I2, SZ)
        expected = expected + 0.95 * np.kron(SX, SX) - 0.25 * np.kron(SY, SY) + 0.30 * np.kron(SZ, SZ)
        np.testing.assert_allclose(rho, expected / 4, atol=1e-15)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            CanonicalBloch((0, 0, 1.2), (0, 0, 0), (0, 0, 0))

    def test_json_round_trip(self):
        data = json.loads(json.dumps(CHSH_EXAMPLE.to_dict()))
        assert CanonicalBloch.from_dict(data) == CHSH_EXAMPLE


class TestBlochDecompose:
    def test_mixed(self, mixed):
        b = bloch_decompose(mixed)
        assert np.allclose(b.x, 0) and np.allclose(b.y, 0) and np.allclose(b.T, 0)

    def test_canonical(self):
        b = bloch_decompose(from_canonical(CHSH_EXAMPLE))
        np.testing.assert_allclose(b.x, CHSH_EXAMPLE.r, atol=1e-14)
        np.testing.assert_allclose(b.y, CHSH_EXAMPLE.s, atol=1e-14)
        np.testing.assert_allclose(b.T, np.diag(CHSH_EXAMPLE.v), atol=1e-14)

    def test_ewl_bell_against_explicit_traces(self):
        rho = ewl_state(EwlSpec("psi", 1.0, 1 / np.sqrt(2), 0.0))
        b = bloch_decompose(rho)
        paulis = (SX, SY, SZ)
        T = np.array([[trace_pauli(rho, a, c) for c in paulis] for a in paulis])
        np.testing.assert_allclose(T, np.diag([1.0, -1.0, 1.0]), atol=1e-14)
        np.testing.assert_allclose(b.T, T, atol=1e-14)
        assert np.allclose(b.x, 0) and np.allclose(b.y, 0)

    def test_round_trip_random(self, random_states):
        b = bloch_decompose(random_states[:200])
        np.testing.assert_allclose(bloch_reconstruct(b.x, b.y, b.T), random_states[:200], atol=1e-12)


class TestPhysicality:
    def test_examples(self, mixed):
        assert is_physical(mixed)
        assert not is_physical(from_canonical(CanonicalBloch((0, 0, 0), (0, 0, 0), (1, 1, 1))))

    def test_non_hermitian_rejected(self):
        with pytest.raises(DomainError):
            is_physical(np.triu(np.ones((4, 4))) / 4)


class TestPartialTrace:
    def test_bell(self, bell_psi):
        np.testing.assert_allclose(partial_trace(bell_psi, "B"), I2 / 2, atol=1e-15)

    def test_product(self):
        a = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
        b = np.array([[0.4, 0.1j], [-0.1j, 0.6]])
        rho = np.kron(a, b)
        np.testing.assert_allclose(partial_trace(rho, "A"), a, atol=1e-15)
        np.testing.assert_allclose(partial_trace(rho, "B"), b, atol=1e-15)

    @pytest.mark.parametrize("r,alpha,theta", [(0.3, 0.6, 0.4), (0.9, 0.2, 2.0), (1.0, 0.95, -1.0)])
    def test_ewl_marginal(self, r, alpha, theta):
        rho = ewl_state(EwlSpec("psi", r, alpha, theta))
        ref = marginal(rho, "B")
        np.testing.assert_allclose(partial_trace(rho, "B"), ref, atol=1e-15)
        assert ref[0, 0].real == pytest.approx(r * (1 - alpha**2) + (1 - r) / 2, abs=1e-14)
        assert abs(ref[0, 1]) < 1e-15

    def test_bad_keep(self, mixed):
        with pytest.raises(DomainError):
            partial_trace(mixed, "C")


class TestEntropy:
    def test_pure_and_mixed(self, bell_psi, mixed):
        assert von_neumann_entropy(bell_psi) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(mixed) == pytest.approx(2.0, abs=1e-12)

    def test_binary_value(self):
        h = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
        assert h == pytest.approx(0.811278, abs=1e-6)
        assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(h, abs=1e-14)

    def test_negative_eigenvalue(self):
        with pytest.raises(DomainError):
            von_neumann_entropy(np.diag([1.1, -0.1]))

    def test_product_additivity(self):
        a = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
        b = np.array([[0.4, 0.1j], [-0.1j, 0.6]])
        assert von_neumann_entropy(np.kron(a, b)) == pytest.approx(
            von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-10
        )


class TestConditionalEntropy:
    def test_examples(self, bell_psi, mixed):
        assert conditional_entropy(bell_psi) == pytest.approx(-1.0, abs=1e-12)
        assert conditional_entropy(mixed) == pytest.approx(1.0, abs=1e-12)

    def test_distillable(self, bell_psi):
        assert distillable_lower_bound(bell_psi) == pytest.approx(1.0, abs=1e-12)
        assert distillable_lower_bound(np.kron(np.diag([0.3, 0.7]), np.diag([0.5, 0.5]))) == 0.0

    def test_distillable_werner(self):
        r = 0.9
        # Werner spectrum: one eigenvalue (1+3r)/4 and three (1-r)/4; the marginal is I/2
        eigs = [(1 + 3 * r) / 4] + [(1 - r) / 4] * 3
        expected = max(0.0, -(entropy_bits(eigs) - 1.0))
        rho = ewl_state(EwlSpec("psi", r, 1 / np.sqrt(2), 0.0))
        assert distillable_lower_bound(rho) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.4968162683, abs=1e-9)


class TestConcurrence:
    def test_examples(self, bell_psi, mixed):
        assert concurrence(bell_psi) == pytest.approx(1.0, abs=1e-9)
        assert concurrence(mixed) == pytest.approx(0.0, abs=1e-12)

    def test_ewl_closed_form(self):
        rho = ewl_state(EwlSpec("psi", 0.5, 1 / np.sqrt(2), 0.0))
        assert wootters_direct(rho) == pytest.approx(0.25, abs=1e-9)
        assert concurrence(rho) == pytest.approx(0.25, abs=1e-9)

    @pytest.mark.parametrize("r,alpha", [(0.8, 0.3), (0.6, 0.9), (0.95, 0.5)])
    def test_ewl_family_formula(self, r, alpha):
        rho = ewl_state(EwlSpec("psi", r, alpha, 0.7))
        expected = max(0.0, 2 * r * alpha * np.sqrt(1 - alpha**2) - (1 - r) / 2)
        assert concurrence(rho) == pytest.approx(expected, abs=1e-9)

    def test_matches_direct_eigenvalue_route(self, random_states):
        ours = concurrence(random_states[:300])
        ref = [wootters_direct(r) for r in random_states[:300]]
        np.testing.assert_allclose(ours, ref, atol=1e-7)

    def test_separable_mixture(self):
        rng = np.random.default_rng(3)
        rho = np.zeros((4, 4), dtype=complex)
        weights = rng.dirichlet(np.ones(6))
        for w in weights:
            a = rng.normal(size=2) + 1j * rng.normal(size=2)
            b = rng.normal(size=2) + 1j * rng.normal(size=2)
            rho += w * np.kron(proj(a / np.linalg.norm(a)), proj(b / np.linalg.norm(b)))
        assert concurrence(rho) == pytest.approx(0.0, abs=1e-7)


class TestTeleportation:
    def test_bell_and_mixed(self, bell_psi, mixed):
        assert teleportation_N(bell_psi) == pytest.approx(3.0)
        assert teleportation_N(mixed) == pytest.approx(0.0, abs=1e-15)
        assert average_fidelity(bell_psi) == pytest.approx(1.0)
        assert average_fidelity(mixed) == pytest.approx(0.5)

    def test_canonical_abs_sum(self):
        rho = from_canonical(CanonicalBloch((0, 0, 0), (0, 0, 0), (0.5, -0.3, 0.4)))
        assert teleportation_N(rho) == pytest.approx(1.2, abs=1e-14)

    def test_chsh(self, bell_psi, mixed):
        assert chsh_parameter(bell_psi) == pytest.approx(2.0)
        assert chsh_parameter(mixed) == pytest.approx(0.0, abs=1e-15)
        rho = from_canonical(CHSH_EXAMPLE)
        assert chsh_parameter(rho) <= 1.0
        assert conditional_entropy(rho) < 0


class TestEwl:
    def test_bell_states(self):
        np.testing.assert_allclose(
            ewl_state(EwlSpec("psi", 1.0, 1 / np.sqrt(2), 0.0)), proj((ket("00") + ket("11")) / np.sqrt(2)), atol=1e-15
        )
        np.testing.assert_allclose(
            ewl_state(EwlSpec("phi", 1.0, 1 / np.sqrt(2), 0.0)), proj((ket("10") + ket("01")) / np.sqrt(2)), atol=1e-15
        )

    def test_zero_purity(self, mixed):
        np.testing.assert_allclose(ewl_state(EwlSpec("phi", 0.0, 0.3, 1.0)), mixed, atol=1e-15)

    @pytest.mark.parametrize("kwargs", [{"family": "chi"}, {"purity": 1.5}, {"alpha": -0.1}])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            EwlSpec(**kwargs)


class TestOctahedronVertex:
    def test_spectrum_at_x_vertex(self):
        rho = octahedron_vertex_state((1, 0, 0), 0.5)
        np.testing.assert_allclose(np.linalg.eigvalsh(rho), [0, 0, 0.25, 0.75], atol=1e-14)
        assert conditional_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_z_vertex_ignores_parameter(self):
        a = octahedron_vertex_state((0, 0, 1), 0.9)
        b = octahedron_vertex_state((0, 0, 1), -0.2)
        np.testing.assert_allclose(a, b)
        np.testing.assert_allclose(a, (proj(ket("11")) + proj(ket("00"))) / 2, atol=1e-15)
        assert conditional_entropy(a) == pytest.approx(0.0, abs=1e-12)

    def test_rank_deficient_at_full_weight(self):
        rho = octahedron_vertex_state((-1, 0, 0), 1.0)
        eigs = np.linalg.eigvalsh(rho)
        np.testing.assert_allclose(eigs, [0, 0, 0, 1], atol=1e-14)
        assert conditional_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("vertex", [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    @pytest.mark.parametrize("a", [-1.0, -0.4, 0.0, 0.7, 1.0])
    def test_all_vertices(self, vertex, a):
        rho = octahedron_vertex_state(vertex, a)
        assert is_physical(rho)
        assert conditional_entropy(rho) == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(np.diag(bloch_decompose(rho).T), vertex, atol=1e-14)

    def test_not_a_vertex(self):
        with pytest.raises(DomainError):
            octahedron_vertex_state((1, 1, 0), 0.0)


def test_state_json_round_trip(bell_psi):
    data = json.loads(json.dumps(state_to_dict(bell_psi)))
    np.testing.assert_allclose(state_from_dict(data), bell_psi)
    with pytest.raises(DomainError):
        state_from_dict({"re": [[1]]})
