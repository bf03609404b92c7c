import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kporosity import kpgrid
from kporosity.setgen import CantorSpec, SparseGrid, gen_cantor, gen_product


@given(st.integers(1, 3), st.integers(1, 40), st.data(), st.text(max_size=30))
def test_round_trip(n, R, data, meta):
    cells = data.draw(st.lists(st.tuples(*[st.integers(0, R - 1)] * n), max_size=30))
    g = SparseGrid(n, R, np.array(cells, dtype=np.int64).reshape(-1, n), meta)
    back = kpgrid.loads(kpgrid.dumps(g))
    assert (back.n, back.R, back.metadata) == (n, R, meta)
    np.testing.assert_array_equal(back.occupied, g.occupied)


def test_file_round_trip(tmp_path):
    c = gen_cantor(CantorSpec(1 / 3, 3), 27)
    g = gen_product([c, c])
    kpgrid.write(g, tmp_path / "g.kpgrid")
    back = kpgrid.read(tmp_path / "g.kpgrid")
    np.testing.assert_array_equal(back.occupied, g.occupied)
    assert back.metadata == g.metadata


def test_layout_is_little_endian():
    blob = kpgrid.dumps(SparseGrid(2, 300, np.array([[1, 2]]), "ab"))
    assert blob[:4] == b"KPGR"
    assert struct.unpack_from("<HHQQ", blob, 4) == (1, 2, 300, 1)
    assert struct.unpack_from("<QQ", blob, 24) == (1, 2)
    assert struct.unpack_from("<I", blob, 40) == (2,)
    assert blob[44:] == b"ab"


def good_blob():
    return bytearray(kpgrid.dumps(SparseGrid(1, 10, np.array([[2], [5]]), "m")))


@pytest.mark.parametrize("mutate", [
    lambda b: b.__setitem__(slice(0, 4), b"XXXX"),
    lambda b: b.__setitem__(slice(4, 6), struct.pack("<H", 2)),
    lambda b: b.__setitem__(slice(24, 32), struct.pack("<Q", 10)),
    lambda b: b.__setitem__(slice(24, 40), struct.pack("<QQ", 5, 2)),
    lambda b: b.extend(b"junk"),
    lambda b: b.__delitem__(slice(30, None)),
])
def test_rejects_malformed(mutate):
    blob = good_blob()
    mutate(blob)
    with pytest.raises(kpgrid.GridFormatError):
        kpgrid.loads(bytes(blob))
