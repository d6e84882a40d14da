"""Smoke tests for the molcoh python bindings."""

import math

import pytest

import molcoh


@pytest.fixture(scope="module")
def tiny_wavefunction():
    config = molcoh.RunConfig()
    config.preset = "h2"
    config.basis_target = 24
    config.trials = 16
    config.refine_cycles = 0
    config.seed = 5
    return molcoh.solve(config)


def test_presets_and_warnings():
    system, warning = molcoh.build_system("h2")
    assert warning == ""
    assert system.size == 4
    assert [p.mass for p in system.particles][:2] == [1836.15, 1836.15]
    assert system.identical_groups == [[0, 1], [2, 3]]

    _, warning = molcoh.build_system_h2z(2.5)
    assert "unbound" in warning

    with pytest.raises(ValueError):
        molcoh.build_system("argon")


def test_frame_shape():
    system, _ = molcoh.build_system("hehp")
    frame = molcoh.build_frame(system, 0)
    assert frame.n_coords == 3
    assert frame.ti_block.shape == (3, 4)
    for row in frame.ti_block:
        assert abs(sum(row)) < 1e-12


def test_config_parsing_and_digest():
    config = molcoh.parse_config("preset = ps2\nseed = 11\n")
    assert config.preset == "ps2"
    assert config.seed == 11
    assert config.digest() == molcoh.parse_config("preset = ps2\nseed = 11\n").digest()

    with pytest.raises(RuntimeError):
        molcoh.parse_config("preset = ps2\nnonsense = 1\n")


def test_solve_and_density(tiny_wavefunction):
    wf = tiny_wavefunction
    assert wf.basis_size == 24
    assert wf.energy < -0.9  # already below the separated-atom threshold
    sizes = [step.basis_size for step in wf.history]
    assert sizes == sorted(sizes)

    report = molcoh.converge_report(wf)
    assert report.virial_ratio < 0.0

    scan = molcoh.suppression_scan(wf, 0, 0.7, 1.0)
    assert len(scan.ratio) == 360
    assert scan.ratio[0] == 1.0
    assert all(r <= 1.0 + 1e-10 for r in scan.ratio)

    features = molcoh.extract_features(scan)
    assert 0.0 <= features.depth < 1.0

    assert molcoh.density_diag(wf, 0, 0.7) > 0.0
    peak = molcoh.radial_argmax(wf, 0)
    assert 0.0 <= peak < 3.0


def test_wavefunction_round_trip(tiny_wavefunction, tmp_path):
    path = str(tmp_path / "state.wf")
    molcoh.save_wavefunction(tiny_wavefunction, path)
    loaded, warning = molcoh.load_wavefunction(path)
    assert warning == ""
    assert loaded.energy == tiny_wavefunction.energy
    assert math.isclose(
        loaded.coefficients @ loaded.coefficients,
        tiny_wavefunction.coefficients @ tiny_wavefunction.coefficients,
        rel_tol=0,
        abs_tol=0,
    )


def test_scan_particles():
    system, _ = molcoh.build_system("hehp")
    assert molcoh.scan_particles(system) == [0, 1]
    system, _ = molcoh.build_system("ps2")
    assert molcoh.scan_particles(system) == [0]
