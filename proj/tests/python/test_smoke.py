# Copyright 2026 The PCE Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import tempfile
from pathlib import Path

import pytest

import pce

BELL = "qubits 2 shots 20\nX90 q0\nVZ q0 0.5\nCZ q0 q1\nMEAS q0\nMEAS q1\n"


def test_quantize_round_trip():
    w = pce.quantize_phase(math.pi / 2)
    assert w == 1 << 30
    assert pce.dequantize_phase(w) == pytest.approx(math.pi / 2)


def test_u3_decompose_shape():
    ops = pce.u3_decompose(0.3, 0.2, 0.1)
    assert [k for k, _ in ops] == ["VZ", "X90", "VZ", "X90", "VZ"]


def test_identify_rb_preset():
    circuits = pce.generate("rb")
    assert len(circuits) == 736
    assert len(pce.identify(circuits)) == 32


def test_rip_blob_round_trip():
    circuits = [BELL, BELL.replace("0.5", "1.25"), "qubits 1 shots 5\nX90 q0\nMEAS q0\n"]
    r = pce.rip(circuits)
    assert r["groups"] == [[0, 1], [2]]
    d = pce.debinarize(r["blob"])
    assert d["groups"] == r["groups"]
    assert d["words"][1][0] == [pce.quantize_phase(1.25)]


def test_corrupt_blob_raises_typed_error():
    blob = pce.rip([BELL])["blob"]
    with pytest.raises(pce.PceError):
        pce.debinarize(blob[:-3])


def test_machine_file_round_trip():
    text = pce.disassemble(pce.assemble(BELL))
    assert "X90" in text


def test_modes_agree():
    circuits = [BELL, BELL.replace("0.5", "2.0")]
    base = pce.run(circuits, mode="baseline", seed=3)
    fast = pce.run(circuits, mode="pce", seed=3)
    assert base["counts"] == fast["counts"]
    assert fast["groups"] == 1
    assert fast["profile"]["Compile"]["iterations"] == 1
    assert base["profile"]["Compile"]["iterations"] == 2


def test_cmd_generate():
    with tempfile.TemporaryDirectory() as d:
        code, _ = pce.cmd("generate", "cb", out=str(Path(d) / "cb"))
        assert code == 0
        assert (Path(d) / "cb").exists()


def test_invalid_circuit():
    with pytest.raises(pce.PceError):
        pce.normalize_circuit("qubits 1 shots 1\nCZ q0 q0\n")
