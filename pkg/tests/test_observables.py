import numpy as np
import pytest

from qzoom import models
from qzoom.linalg import expm_unitary
from qzoom.observables import (
    ObservableSeries,
    electric_energy,
    entanglement_entropy,
    flavor_probability,
    log_negativity,
    persistence,
    rayleigh,
)

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)


def product_state(rng, n):
    psi = np.ones(1, dtype=complex)
    for _ in range(n):
        s = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = np.kron(psi, s / np.linalg.norm(s))
    return psi


def test_rayleigh_and_persistence_basics():
    H = np.diag([1.0, 2.0])
    psi = np.array([1.0, 0.0])
    assert rayleigh(psi, H) == 1.0
    assert persistence(psi, psi) == 1.0
    assert abs(electric_energy(np.array([0.0, 1.0]), H) - 2.0) < 1e-12


def test_flavor_probability_initial_state_and_flip():
    spec = models.NeutrinoSpec(n_sites=4)
    psi = models.neutrino_initial_state(spec)
    for i, f in enumerate(spec.initial_flavors):
        assert flavor_probability(psi, i, f) == 0.0
    # site 0 flipped to |1> means the electron neutrino has changed flavor
    flipped = np.zeros(16)
    flipped[0b1011] = 1.0
    assert flavor_probability(flipped, 0, "e") == 1.0
    with pytest.raises(ValueError):
        flavor_probability(psi, 0, "tau")
    with pytest.raises(ValueError):
        flavor_probability(psi, 7, "e")


def test_product_state_has_no_entanglement():
    psi = product_state(np.random.default_rng(15), 3)
    for i in range(3):
        assert entanglement_entropy(psi, i) < 1e-10
    assert log_negativity(psi, 0, 2) == 0.0


def test_bell_pair_maximal_entanglement():
    assert abs(entanglement_entropy(BELL, 0) - 1.0) < 1e-12
    assert abs(entanglement_entropy(BELL, 1) - 1.0) < 1e-12
    assert abs(log_negativity(BELL, 0, 1) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        log_negativity(BELL, 1, 1)


def test_observables_invariant_under_global_phase():
    rng = np.random.default_rng(16)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    rot = np.exp(0.7j) * psi
    assert abs(persistence(rot, psi) - persistence(psi, psi)) < 1e-12
    for i in range(4):
        assert abs(flavor_probability(rot, i, "e") - flavor_probability(psi, i, "e")) < 1e-12
        assert abs(entanglement_entropy(rot, i) - entanglement_entropy(psi, i)) < 1e-10
    assert abs(log_negativity(rot, 0, 3) - log_negativity(psi, 0, 3)) < 1e-10


def test_entropy_and_negativity_ranges():
    rng = np.random.default_rng(17)
    for _ in range(5):
        psi = rng.normal(size=16) + 1j * rng.normal(size=16)
        psi /= np.linalg.norm(psi)
        for i in range(4):
            s = entanglement_entropy(psi, i)
            assert -1e-12 <= s <= 1.0 + 1e-12
        for i in range(4):
            for j in range(i + 1, 4):
                assert log_negativity(psi, i, j) >= 0.0


def test_neutrino_exchange_symmetry():
    spec = models.NeutrinoSpec(n_sites=4)
    H = models.neutrino_hamiltonian(spec)
    psi_in = models.neutrino_initial_state(spec)
    for t in (0.5, 1.1, 3.0):
        psi = expm_unitary(H, t) @ psi_in
        assert abs(flavor_probability(psi, 0, "e") - flavor_probability(psi, 3, "mu")) < 1e-9
        assert abs(entanglement_entropy(psi, 0) - entanglement_entropy(psi, 3)) < 1e-9
        assert abs(log_negativity(psi, 0, 1) - log_negativity(psi, 2, 3)) < 1e-9


def test_series_csv_layout():
    s = ObservableSeries([0.0, 1.0], [0.5, 0.25], "demo")
    text = s.to_csv()
    lines = text.splitlines()
    assert lines[0] == "t,value,lo68,hi68"
    assert lines[1] == "0.0,0.5,0.5,0.5"
    with pytest.raises(ValueError):
        ObservableSeries([0.0], [1.0, 2.0], "bad")
