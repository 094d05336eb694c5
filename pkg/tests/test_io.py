import json
import struct

import numpy as np
import pytest

from semantic_som import io
from semantic_som.errors import NetworkFormatError
from semantic_som.som import GridShape, TrainingSchedule, init_network


def test_layout(tmp_path):
    net = init_network(GridShape(2, 3), GridShape(4, 5), 1)
    io.save_network(net, tmp_path / "n.somnet")
    data = (tmp_path / "n.somnet").read_bytes()
    assert data[:8] == b"SOMNET1\n"
    assert struct.unpack("<4I", data[8:24]) == (2, 3, 4, 5)
    weights = np.frombuffer(data[24:], dtype="<f8").reshape(20, 6)
    assert np.array_equal(weights, net.weights)


def test_round_trip(tmp_path):
    net = init_network(GridShape(3, 3), GridShape(2, 2), 9)
    io.save_network(net, tmp_path / "n.somnet")
    assert io.load_network(tmp_path / "n.somnet") == net


@pytest.mark.parametrize("payload", [b"NOTASOM\n", b"SOMNET1\n\x01\x00",
                                     b"SOMNET1\n" + struct.pack("<4I", 1, 1, 1, 1) + b"\x00" * 4,
                                     b"SOMNET1\n" + struct.pack("<4I", 0, 1, 1, 1)])
def test_bad_files(tmp_path, payload):
    (tmp_path / "bad").write_bytes(payload)
    with pytest.raises(NetworkFormatError):
        io.load_network(tmp_path / "bad")


def test_meta_sidecar(tmp_path, glyphs):
    p = tmp_path / "m.somnet"
    io.save_meta(p, TrainingSchedule(seed=4), glyphs, {"margin": float("inf")})
    meta = json.loads((tmp_path / "m.somnet.meta.json").read_text())
    assert meta["schedule"]["seed"] == 4
    assert meta["stimulus_checksum"] == glyphs.checksum()
    assert meta["margin"] is None
