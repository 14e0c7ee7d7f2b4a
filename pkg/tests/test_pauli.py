import itertools
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    all_strings,
    annihilation,
    fermion_matrix,
    hamiltonian_matrix,
    number_sector_ground,
    pauli_matrix,
)
from vqelab.errors import CapacityError, DimensionError, ParseError, ValidationError
from vqelab.pauli import (
    FermionHamiltonian,
    FermionTerm,
    PauliAxis,
    PauliString,
    QubitHamiltonian,
    bundled_molecule,
    dense_matrix,
    dump_hamiltonian,
    exact_ground_energy,
    jordan_wigner,
    load_hamiltonian,
    number_penalty,
    pauli_multiply,
    simplify,
)
from vqelab.pauli import _ladder

# PySCF FCI electronic energies frozen when the fixtures were generated
H2_FCI = -1.857275030
HEHP_FCI = -3.922295720


def qh(terms, n=None):
    return QubitHamiltonian.from_dict(terms, n)


def fh(n, *terms):
    return FermionHamiltonian(
        n, tuple(FermionTerm("onebody" if len(i) == 2 else "twobody", i, v) for i, v in terms)
    )


# ---------------------------------------------------------------- strings


def test_axis_enum_has_four_values():
    assert [a.value for a in PauliAxis] == ["I", "X", "Y", "Z"]


def test_string_basics():
    p = PauliString("XIZY")
    assert p.n_qubits == 4 and p.weight == 3 and p[2] is PauliAxis.Z
    assert PauliString.identity(3).is_identity()
    with pytest.raises(ValidationError):
        PauliString("")
    with pytest.raises(ValidationError):
        PauliString("XA")


def test_string_matrix_qubit0_is_least_significant():
    # X on qubit 0 maps |00> (index 0) to |10>_q0 (index 1)
    np.testing.assert_array_equal(PauliString("XI").matrix(), pauli_matrix("XI"))
    assert PauliString("XI").matrix()[1, 0] == 1


@pytest.mark.parametrize(
    "a, b, phase, prod",
    [("X", "X", 1, "I"), ("X", "Y", 1j, "Z"), ("XZ", "YI", 1j, "ZZ")],
)
def test_multiply_examples(a, b, phase, prod):
    assert pauli_multiply(a, b) == (phase, PauliString(prod))


def test_multiply_length_mismatch():
    with pytest.raises(DimensionError):
        pauli_multiply("X", "XX")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiply_exhaustive_against_kronecker(n):
    strings = all_strings(n)
    mats = {s: pauli_matrix(s) for s in strings}
    for a, b in itertools.product(strings, repeat=2):
        phase, prod = pauli_multiply(a, b)
        assert phase in (1, -1, 1j, -1j)
        np.testing.assert_allclose(mats[a] @ mats[b], phase * mats[prod.axes], atol=1e-12)


# ---------------------------------------------------------------- simplify


def test_simplify_examples():
    assert simplify(qh({"X": 1.0}) + qh({"X": 2.0})).to_dict() == {"X": 3.0}
    assert simplify(qh({"Z": 1e-15}), 1e-12).to_dict() == {}
    h = QubitHamiltonian(2, ((0.5, "ZI"), (0.5, "IZ"), (-0.5, "ZI")))
    assert simplify(h).to_dict() == {"IZ": 0.5}


def test_simplify_sorts_terms():
    h = simplify(qh({"ZZ": 1, "XI": 2, "IY": 3}))
    assert [t.string.axes for t in h.terms] == ["IY", "XI", "ZZ"]


coeff = st.floats(-2, 2, allow_nan=False).map(lambda x: round(x, 6))


@st.composite
def hamiltonians(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    strings = st.text("IXYZ", min_size=n, max_size=n)
    terms = draw(st.lists(st.tuples(coeff, strings), max_size=12))
    return QubitHamiltonian(n, tuple(terms))


@settings(max_examples=60, deadline=None)
@given(hamiltonians())
def test_simplify_idempotent_and_matrix_preserving(h):
    once = simplify(h)
    assert simplify(once) == once
    tol = 1e-12 * max(1, len(h))
    np.testing.assert_allclose(dense_matrix(once), dense_matrix(h), atol=tol)


# ---------------------------------------------------------------- dense matrix


def test_dense_matrix_examples():
    np.testing.assert_array_equal(dense_matrix(qh({"Z": 1.0})), np.diag([1, -1]))
    np.testing.assert_array_equal(dense_matrix(qh({"XX": 1.0})), np.fliplr(np.eye(4)))
    np.testing.assert_array_equal(dense_matrix(QubitHamiltonian(2)), np.zeros((4, 4)))


def test_dense_matrix_capacity():
    with pytest.raises(CapacityError):
        dense_matrix(qh({"Z" * 13: 1.0}))


def test_dense_matrix_random_n4_against_kronecker():
    rng = np.random.default_rng(4)
    strings = all_strings(4)
    for _ in range(100):
        picks = rng.choice(len(strings), size=5, replace=False)
        terms = {strings[k]: float(rng.normal()) for k in picks}
        np.testing.assert_allclose(dense_matrix(qh(terms)), hamiltonian_matrix(terms, 4), atol=1e-10)


# ---------------------------------------------------------------- ground energy


def test_ground_energy_examples():
    assert exact_ground_energy(qh({"Z": 1.0})) == pytest.approx(-1.0, abs=1e-12)
    assert exact_ground_energy(qh({"X": 0.5, "Z": 0.5})) == pytest.approx(-np.sqrt(2) / 2, abs=1e-12)


def test_ground_energy_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        exact_ground_energy(qh({"X": 1j}))


def test_ground_energy_is_variational_lower_bound():
    h = bundled_molecule("h2")
    e0 = exact_ground_energy(h)
    m = dense_matrix(h)
    rng = np.random.default_rng(0)
    for _ in range(100):
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        v /= np.linalg.norm(v)
        assert e0 <= np.vdot(v, m @ v).real + 1e-12


# ---------------------------------------------------------------- Jordan-Wigner


def test_jw_number_operator():
    assert jordan_wigner(fh(1, ((0, 0), 1.0))).to_dict() == {"I": 0.5, "Z": -0.5}


def test_jw_hopping():
    h = jordan_wigner(fh(2, ((0, 1), 1.0), ((1, 0), 1.0)))
    assert h.to_dict() == pytest.approx({"XX": 0.5, "YY": 0.5})


def test_jw_one_body_two_orbitals_weight_at_most_two():
    h = jordan_wigner(fh(2, ((0, 0), 0.3), ((0, 1), -0.7), ((1, 0), -0.7), ((1, 1), 1.1)))
    assert max(t.string.weight for t in h.terms) <= 2


def test_jw_one_body_only_gives_low_weight():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(5, 5))
    a = a + a.T
    h = jordan_wigner(fh(5, *(((p, q), a[p, q]) for p in range(5) for q in range(5))))
    # the Z chain between p and q is part of the string; the non-chain
    # factors are at most two
    for t in h.terms:
        outer = [a for a in t.string.axes if a in "XY"]
        assert len(outer) <= 2


def test_jw_rejects_non_hermitian_data():
    with pytest.raises(ValidationError):
        jordan_wigner(fh(2, ((0, 1), 1.0)))


def test_jw_capacity():
    with pytest.raises(CapacityError):
        jordan_wigner(fh(17, ((0, 0), 1.0)))


def jw_ladder(p, n, dagger):
    d = _ladder(p, n, dagger)
    return dense_matrix(QubitHamiltonian.from_dict(d, n))


def test_canonical_anticommutation():
    n = 4
    ann = [jw_ladder(p, n, False) for p in range(n)]
    cre = [jw_ladder(p, n, True) for p in range(n)]
    for p, q in itertools.product(range(n), repeat=2):
        np.testing.assert_allclose(ann[p] @ cre[q] + cre[q] @ ann[p], np.eye(16) * (p == q), atol=1e-12)
        np.testing.assert_allclose(ann[p] @ ann[q] + ann[q] @ ann[p], 0, atol=1e-12)
        np.testing.assert_allclose(ann[p], annihilation(p, n), atol=1e-12)


def random_integrals(rng, n):
    h1 = rng.normal(size=(n, n))
    h1 = h1 + h1.T
    terms = [((p, q), h1[p, q]) for p in range(n) for q in range(n)]
    # two-body coefficient v_pqrs with v_pqrs = v_srqp (hermiticity)
    for p, q, r, s in itertools.product(range(n), repeat=4):
        if (p, q, r, s) <= (s, r, q, p):
            v = rng.normal()
            terms.append(((p, q, r, s), v))
            if (p, q, r, s) != (s, r, q, p):
                terms.append(((s, r, q, p), v))
    return terms


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jw_exhaustive_small(n):
    rng = np.random.default_rng(n)
    terms = random_integrals(rng, n)
    jw = dense_matrix(jordan_wigner(fh(n, *terms)))
    np.testing.assert_allclose(jw, fermion_matrix(terms, n), atol=1e-10)


def test_jw_random_n4():
    rng = np.random.default_rng(44)
    for _ in range(10):
        terms = random_integrals(rng, 4)
        jw = dense_matrix(jordan_wigner(fh(4, *terms)))
        np.testing.assert_allclose(jw, fermion_matrix(terms, 4), atol=1e-10)


def test_number_penalty_zero_on_target_sector():
    m = dense_matrix(number_penalty(4, 2, 1.5))
    for i in range(16):
        k = bin(i).count("1")
        assert m[i, i] == pytest.approx(1.5 * (k - 2) ** 2)
    assert np.allclose(m, np.diag(np.diag(m)))


# ---------------------------------------------------------------- files


def test_load_fermion_text():
    h = load_hamiltonian("format: fermion\nn: 2\nonebody 0 0 -1.25\n")
    assert isinstance(h, FermionHamiltonian) and len(h.terms) == 1
    assert h.terms[0].value == -1.25


def test_load_pauli_text():
    h = load_hamiltonian("format: pauli\nn: 2\n# comment\nZI 0.5\n")
    assert isinstance(h, QubitHamiltonian) and h.to_dict() == {"ZI": 0.5}


def test_load_out_of_range_index():
    with pytest.raises(ValidationError):
        load_hamiltonian("format: fermion\nn: 2\nonebody 0 5 1.0\n")


@pytest.mark.parametrize(
    "text, line",
    [
        ("format: pauli\nn: 2\nZI zero\n", 3),
        ("format: pauli\nn: 2\nZI 1.0\nformat: pauli\n", 4),
        ("format: quux\n", 1),
        ("format: fermion\nn: 2\nthreebody 0 0 1.0\n", 3),
    ],
)
def test_load_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        load_hamiltonian(text)
    assert info.value.line == line


def test_load_axes_length_mismatch():
    with pytest.raises(ValidationError):
        load_hamiltonian("format: pauli\nn: 2\nZZZ 1.0\n")


@settings(max_examples=40, deadline=None)
@given(hamiltonians(max_n=4))
def test_pauli_file_round_trip_bit_exact(h):
    h = QubitHamiltonian(h.n_qubits, tuple((t.coefficient.real, t.string) for t in h.terms))
    back = load_hamiltonian(dump_hamiltonian(h, ["note"]))
    assert back == h


def test_fermion_file_round_trip_bit_exact():
    rng = np.random.default_rng(2)
    h = fh(3, *random_integrals(rng, 3))
    assert load_hamiltonian(dump_hamiltonian(h)) == h


# ---------------------------------------------------------------- fixtures


@pytest.mark.parametrize(
    "name, fci, n_terms", [("h2", H2_FCI, 15), ("heh+", HEHP_FCI, 27)]
)
def test_bundled_molecules(name, fci, n_terms):
    h = bundled_molecule(name)
    assert h.n_qubits == 4 and len(h) == n_terms
    assert h.is_hermitian()
    assert exact_ground_energy(h) == pytest.approx(fci, abs=1e-8)


def test_h2_fixture_near_implied_reference():
    implied = -1.851810004 / 0.9970575
    assert abs(exact_ground_energy(bundled_molecule("h2")) - implied) < 0.01


@pytest.mark.parametrize("stem, fci", [("h2", H2_FCI), ("hehp", HEHP_FCI)])
def test_fermion_fixture_matches_occupation_basis_oracle(stem, fci):
    text = resources.files("vqelab.data").joinpath(f"{stem}.fermion").read_text()
    h = load_hamiltonian(text)
    terms = [(t.indices, t.value) for t in h.terms]
    m = fermion_matrix(terms, h.n_orbitals)
    assert number_sector_ground(m, 4, 2) == pytest.approx(fci, abs=1e-8)


def test_unknown_bundled_molecule():
    with pytest.raises(ValidationError):
        bundled_molecule("lih")
