import time

import pytest

from latgate import catalog, is_automorphism, is_even, is_unimodular
from latgate.autgrp import AutGroupError, OrthogonalGate
from latgate import fixtures


@pytest.mark.parametrize("name", fixtures.GATE_FIXTURES)
def test_gate_fixtures_are_exact_automorphisms(name):
    gates, lat = fixtures.gate_fixture(name)
    assert gates
    for gate in gates:
        assert is_automorphism(lat, gate)


def test_e8b_fixture_lattice_is_e8():
    lat = fixtures.e8_hamming_paper_lattice()
    assert is_even(lat) and is_unimodular(lat)


def test_e8b_printed_g1_is_not_orthogonal():
    # the published matrix cannot be made orthogonal; it ships as row data
    mat = fixtures.e8_hamming_g1_rows()
    with pytest.raises(AutGroupError):
        OrthogonalGate(mat)
    # every row is still unit after the forced two-row repair
    for i in range(mat.rows):
        assert sum(x * x for x in mat.row(i)) == 1


def test_state_fixture_shapes():
    for name, (builder, dims) in fixtures.STATE_FIXTURES.items():
        st = builder()
        assert st.shape.dims == tuple(dims)


def test_unknown_fixture_names():
    with pytest.raises(KeyError):
        fixtures.fixture_state("eq99")
    with pytest.raises(KeyError):
        fixtures.gate_fixture("nope")


@pytest.mark.slow
def test_leech_generators_verify_fast():
    gates = fixtures.leech_generator_gates()
    assert len(gates) >= 14
    lat = catalog("leech")
    t0 = time.monotonic()
    assert all(is_automorphism(lat, g) for g in gates)
    assert time.monotonic() - t0 <= 10
