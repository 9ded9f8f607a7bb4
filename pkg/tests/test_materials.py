import json

import pytest

from rhps_sim import materials as mat


def test_hbar_c_value():
    assert abs(mat.HBAR_C - 1.97327e5) / 1.97327e5 < 1e-6


def test_cucl_default_values():
    exc, bx = mat.cucl_defaults()
    assert exc.hw_t == 3202.2
    assert exc.delta_lt == 5.7
    assert exc.eps_bg == 5.59
    assert exc.mass == 2.3
    assert exc.gamma == 0.5
    assert bx.binding == 32.2
    assert bx.mass == pytest.approx(2.3 * exc.mass)
    assert bx.gamma == pytest.approx(13.2e-3, rel=1e-12)
    assert bx.f_sq == 80.0


def test_biexciton_damping_from_lifetime():
    # hbar / 50 ps agrees with 13.2 ueV within 1%
    gamma = mat.HBAR_MEV_PS / 50.0
    assert abs(gamma - 0.0132) / 0.0132 < 0.01


def test_kinetic_constants():
    exc, _ = mat.cucl_defaults()
    assert mat.HBAR2_OVER_2ME == pytest.approx(38.1, rel=2e-3)
    assert exc.kinetic_const == pytest.approx(38.1 / 2.3, rel=2e-3)


def test_parameter_validation():
    with pytest.raises(ValueError):
        mat.ExcitonParams(hw_t=-1.0, delta_lt=5.7, eps_bg=5.59, mass=2.3,
                          gamma=0.5)
    with pytest.raises(ValueError):
        mat.ExcitonParams(hw_t=3202.2, delta_lt=5.7, eps_bg=0.5, mass=2.3,
                          gamma=0.5)
    with pytest.raises(ValueError):
        mat.BiexcitonParams(binding=32.2, mass=5.29, gamma=0.0, f_sq=80.0)
    with pytest.raises(ValueError):
        mat.PassiveMaterial(n=0.9)


def test_round_trip_bit_for_bit(tmp_path):
    exc, bx = mat.cucl_defaults()
    path = tmp_path / "params.json"
    path.write_text(json.dumps({
        "exciton": mat.exciton_params_to_dict(exc),
        "biexciton": mat.biexciton_params_to_dict(bx)}), encoding="utf-8")
    data = json.loads(path.read_text(encoding="utf-8"))
    exc2 = mat.exciton_params_from_dict(data["exciton"])
    bx2 = mat.biexciton_params_from_dict(data["biexciton"])
    assert exc2 == exc
    assert bx2 == bx
