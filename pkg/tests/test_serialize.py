import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from privcorr.channels import DimensionError, SubsystemDecomposition, channels_equal, random_channel
from privcorr.complement import dilate
from privcorr.instances import RHO1, RHO2, load_fixture, phase_flip_channel
from privcorr.secretshare import cgl23_scheme
from privcorr.serialize import (ParseError, channel_from_json, channel_to_json, decomposition_from_json,
                                decomposition_to_json, isometry_from_json, isometry_to_json, matrix_from_json,
                                matrix_to_json, read_json, scheme_from_json, scheme_to_json, write_json)


@given(seed=st.integers(0, 2**31), din=st.integers(1, 3), dout=st.integers(1, 3))
def test_channel_round_trip_is_bit_exact(seed, din, dout):
    c = random_channel(din, dout, din, seed)
    back = channel_from_json(json.loads(json.dumps(channel_to_json(c))))
    assert np.array_equal(back.kraus, c.kraus)


def test_matrix_entries_are_pairs():
    m = np.array([[1 + 2j, 0.5]])
    assert matrix_to_json(m) == [[[1.0, 2.0], [0.5, 0.0]]]
    np.testing.assert_array_equal(matrix_from_json(matrix_to_json(m)), m)
    with pytest.raises(ParseError):
        matrix_from_json([[1.0, 2.0]])
    with pytest.raises(ParseError):
        matrix_from_json([["a", "b"]])


def test_other_round_trips(tmp_path):
    d = SubsystemDecomposition.subspace([0, 3], 4)
    d2 = decomposition_from_json(decomposition_to_json(d))
    assert (d2.dim_A, d2.dim_B) == (1, 2) and np.array_equal(d2.embed, d.embed)
    v = dilate(random_channel(2, 2, 2, 0))
    assert np.array_equal(isometry_from_json(isometry_to_json(v)).V, v.V)
    s = cgl23_scheme()
    s2 = scheme_from_json(scheme_to_json(s))
    assert s2.share_dims == s.share_dims and np.array_equal(s2.isometry, s.isometry)
    path = tmp_path / "c.json"
    write_json(scheme_to_json(s), path)
    obj, digest = read_json(path)
    assert len(digest) == 64 and scheme_from_json(obj).k == 2


def test_malformed_inputs(tmp_path):
    with pytest.raises(ParseError):
        channel_from_json({"dim_in": 2})
    with pytest.raises(ParseError):
        channel_from_json({"dim_in": 2, "dim_out": 2, "kraus": []})
    with pytest.raises(DimensionError):
        channel_from_json({"dim_in": 3, "dim_out": 2, "kraus": [matrix_to_json(np.eye(2))]})
    with pytest.raises(ParseError):
        scheme_from_json({"k": 1, "n": 1, "secret_dim": 2, "share_dims": [2]})
    with pytest.raises(DimensionError):
        scheme_from_json({"k": 1, "n": 2, "secret_dim": 2, "share_dims": [2], "encoder": matrix_to_json(np.eye(2))})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        read_json(bad)


def test_shipped_fixtures():
    assert channels_equal(channel_from_json(load_fixture("phase_flip")), phase_flip_channel())
    exp = load_fixture("phase_flip_complement_expected")
    np.testing.assert_array_equal(matrix_from_json(exp["rho1"]), RHO1)
    np.testing.assert_array_equal(matrix_from_json(exp["rho2"]), RHO2)
    np.testing.assert_array_equal(matrix_from_json(exp["P"]), RHO1 + RHO2)
    assert scheme_from_json(load_fixture("cgl23")).isometric
    code = decomposition_from_json(load_fixture("phase_flip_code"))
    assert code.dim_B == 2
