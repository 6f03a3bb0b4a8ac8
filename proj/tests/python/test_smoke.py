import math

import pytest

import combline


@pytest.fixture(scope="module")
def single_gap():
    return combline.RealLineSet([(-1.0, 1.0)], (-21.0, 21.0))


@pytest.fixture(scope="module")
def solved(single_gap):
    return combline.solve_map(single_gap)


def test_validate(single_gap):
    rep = combline.validate_geometry(single_gap)
    assert rep.valid
    # longest gap of the single-gap fixture
    assert rep.c1 == pytest.approx(2.0)


def test_tau_cases(single_gap):
    # boundary-layer case: sqrt(|J| * D)
    assert combline.tau(single_gap, 1.0, 1.05) == pytest.approx(
        math.sqrt(0.1), rel=1e-12
    )
    # far case: plain distance
    assert combline.tau(single_gap, 2.0, 4.0) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ValueError):
        combline.tau(single_gap, 0.0, 2.0)


def test_solved_map(single_gap, solved):
    assert solved.tip_preimages()[0] == pytest.approx(0.0, abs=1e-10)
    assert solved.slit_heights()[0] == pytest.approx(1 / math.sqrt(2), abs=1e-8)
    assert solved.evaluate(1j) == pytest.approx(1j, abs=1e-9)
    assert solved.rho(1.0, 2.0) == pytest.approx(math.sqrt(1.5), abs=1e-6)


def test_map_file_roundtrip(tmp_path, solved):
    path = str(tmp_path / "map.txt")
    solved.save(path)
    again = combline.LevinMap.load(path)
    assert again.rho(1.0, 2.0) == pytest.approx(solved.rho(1.0, 2.0), abs=1e-9)


def test_kernel_reproduces_constants(single_gap):
    g = combline.kernel_approx(single_gap, "const:2", 8.0)
    assert g(0.3) == pytest.approx(2.0, abs=1e-5)
    assert g.type_bound == pytest.approx(800.0)


def test_structural_error_maps_to_python():
    with pytest.raises(combline.StructuralError):
        combline.RealLineSet([(-1.0, 1.0)], (0.5, 2.0))
