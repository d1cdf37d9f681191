import json

import numpy as np
import pytest

from hardyops import (
    BlaschkeSpec,
    ClassReport,
    SymbolPair,
    TrigPoly,
    decompose_tph,
    hankel_matrix,
    monomial,
    noninjective_pipeline,
    paired_matrix,
    toeplitz_matrix,
    truncated_toeplitz,
)
from hardyops.io import (
    FormatError,
    blaschke_to_dict,
    dump_json,
    load_json,
    matrix_from_csv,
    matrix_from_dict,
    matrix_to_csv,
    matrix_to_dict,
    report_from_dict,
    report_to_dict,
    symbol_from_dict,
    theta_from_dict,
)
from hardyops.operators import H2Window

from conftest import rand_poly


def json_cycle(obj):
    return json.loads(json.dumps(obj))


def test_matrix_round_trips(rng):
    mats = [
        toeplitz_matrix(rand_poly(rng, -2, 2), 5),
        toeplitz_matrix(rand_poly(rng, -2, 2, d=2), 3),
        paired_matrix(SymbolPair(rand_poly(rng, -1, 1), rand_poly(rng, -1, 1)), 3),
        truncated_toeplitz(monomial(1), BlaschkeSpec([0.3, 0.2j]), 16),
    ]
    for A in mats:
        B = matrix_from_dict(json_cycle(matrix_to_dict(A)))
        assert B.basis == A.basis and B.block_dim == A.block_dim
        np.testing.assert_array_equal(B.data, A.data)


def test_csv_round_trip(rng):
    A = toeplitz_matrix(rand_poly(rng, -3, 3), 6)
    B = matrix_from_csv(matrix_to_csv(A), H2Window(6))
    np.testing.assert_array_equal(B.data, A.data)


def test_symbol_shorthand():
    p = symbol_from_dict({"lo": -1, "coeffs": [2, [3, 1], 5]})
    assert p == TrigPoly(-1, [2, 3 + 1j, 5])


def test_theta_formats():
    spec = BlaschkeSpec([0.5, -0.3 + 0.4j], const=1j)
    assert theta_from_dict(json_cycle(blaschke_to_dict(spec))) == spec
    assert theta_from_dict({"lo": 2, "coeffs": [1]}) == monomial(2)


@pytest.mark.parametrize("bad", [
    {"lo": 0},
    {"lo": 0, "coeffs": []},
    {"lo": 0, "coeffs": [[1, 2, 3]]},
    {"lo": 0, "block_dim": 2, "coeffs": [[[1, 0]]]},
])
def test_bad_symbols(bad):
    with pytest.raises(FormatError):
        symbol_from_dict(bad)


@pytest.mark.parametrize("bad", [
    {"rows": [[1]]},
    {"basis": "H3", "N": 1, "rows": [[1]]},
    {"basis": "H2", "rows": [[1]]},
    {"basis": "H2", "N": 2, "rows": [[1]]},
])
def test_bad_matrices(bad):
    with pytest.raises(FormatError):
        matrix_from_dict(bad)


def test_bad_theta():
    with pytest.raises(FormatError):
        theta_from_dict({"zeros": [[0.99, 0]]})


def test_report_round_trip():
    A = toeplitz_matrix(monomial(1), 8) + hankel_matrix(monomial(0), 8)
    for rep in (decompose_tph(A), noninjective_pipeline(A), ClassReport(False, 0.5)):
        back = report_from_dict(json_cycle(report_to_dict(rep)))
        assert back.verdict == rep.verdict and back.residual == rep.residual
        assert back.symbols == rep.symbols
        if rep.recovered is not None:
            assert back.recovered.phi == rep.recovered.phi and back.recovered.psi == rep.recovered.psi


def test_files(tmp_path):
    path = tmp_path / "x.json"
    dump_json({"a": 1}, path)
    assert load_json(path) == {"a": 1}
    path.write_text("{not json")
    with pytest.raises(FormatError):
        load_json(path)
