import numpy as np
import pytest
from hypothesis import given

from wsim.entanglement import WSpec, random_wspec
from wsim.errors import InfeasibleTargetError, InvalidRegisterError
from wsim.optics import (
    BeamSplitterChain,
    ModeState,
    cavity_register,
    design_chain,
    simulate_chain,
    transfer_through_cavities,
)
from wsim.qstate import StateVector

from strategies import wspecs


def test_uniform_w3_reflectivities():
    chain = design_chain(WSpec.uniform(3))
    np.testing.assert_allclose(chain.reflectivities, [1 / np.sqrt(3), 1 / np.sqrt(2)], atol=1e-15)
    np.testing.assert_allclose(simulate_chain(chain).amplitudes, np.full(3, 1 / np.sqrt(3)), atol=1e-15)


def test_two_mode_splitter():
    chain = BeamSplitterChain((0.6,))
    np.testing.assert_allclose(simulate_chain(chain).amplitudes, [0.6, 0.8])
    assert chain.transmissivities == pytest.approx((0.8,))


def test_phases_applied_after_chain():
    target = WSpec([0.6, 0.8j])
    chain = design_chain(target)
    assert chain.phases == pytest.approx((0.0, np.pi / 2))
    np.testing.assert_allclose(simulate_chain(chain).amplitudes, target.coeffs, atol=1e-15)


def exhausted(w):
    # a mode still needs amplitude but its whole tail weight underflows to zero
    m = np.abs(w.coeffs)
    return any(m[k] > 0 and sum(float(x) ** 2 for x in m[k:]) == 0.0 for k in range(w.n))


@given(wspecs(2, 12))
def test_round_trip(w):
    try:
        chain = design_chain(w)
    except InfeasibleTargetError:
        assert exhausted(w)
        return
    out = simulate_chain(chain).amplitudes
    assert np.abs(out - w.coeffs).max() < 1e-12


@given(wspecs(2, 10))
def test_lossless(w):
    if exhausted(w):
        return
    out = simulate_chain(design_chain(w)).amplitudes
    assert abs(np.sum(np.abs(out) ** 2) - 1) < 1e-12


def test_trailing_zeros_are_feasible():
    chain = design_chain(WSpec([1, 0, 0]))
    assert chain.reflectivities == (1.0, 0.0)
    np.testing.assert_allclose(simulate_chain(chain).amplitudes, [1, 0, 0])


def test_near_unit_reflectivity_keeps_tail():
    # r_1 rounds to 1.0, yet the stored transmission still passes 1e-10 downstream
    w = WSpec([1, 1e-10j])
    chain = design_chain(w)
    assert chain.reflectivities[0] == 1.0
    assert chain.transmissivities[0] == pytest.approx(1e-10)
    np.testing.assert_allclose(simulate_chain(chain).amplitudes, w.coeffs, rtol=0, atol=1e-25)


def test_infeasible_target():
    # |c_2|^2 underflows: no splitter setting can divert that amplitude
    with pytest.raises(InfeasibleTargetError, match="mode 2"):
        design_chain(WSpec([1, 1e-200, 0]))


def test_chain_validation():
    with pytest.raises(InvalidRegisterError):
        BeamSplitterChain((1.2,))
    with pytest.raises(InvalidRegisterError):
        BeamSplitterChain((0.5,), phases=(0.0,))
    with pytest.raises(InvalidRegisterError):
        BeamSplitterChain((0.6,), transmissions=(0.6,))


def test_cavity_register_from_modes():
    w, index_map = cavity_register(ModeState([0.6, 0, 0.8]))
    np.testing.assert_allclose(w.coeffs, [0.6, 0, 0.8])
    assert index_map == (1, 2, 3)


def test_cavity_register_from_occupation_state():
    w, _ = cavity_register(WSpec([0.6, 0.8j, 0]).state())
    np.testing.assert_allclose(w.coeffs, [0.6, 0.8j, 0])


def test_cavity_register_rejects_two_photons():
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = amps[0b011] = 1 / np.sqrt(2)
    with pytest.raises(InvalidRegisterError):
        cavity_register(StateVector(3, amps))
    with pytest.raises(TypeError):
        cavity_register([0.6, 0.8])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_pipeline_end_to_end(rng, n):
    w = random_wspec(n, rng)
    report = transfer_through_cavities(design_chain(w), StateVector(1, [0.6, 0.8]))
    assert report.success_probability == pytest.approx(
        2 * min(abs(w.c(1)) ** 2, abs(w.c(n)) ** 2), abs=1e-12
    )
