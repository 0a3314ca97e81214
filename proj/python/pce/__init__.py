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

"""Parameterized circuit execution: batch generation, deduplication and runs."""

from ._core import (
    PceError,
    assemble,
    cmd,
    debinarize,
    dequantize_phase,
    disassemble,
    generate,
    generate_spec,
    identify,
    normalize_circuit,
    peel,
    quantize_phase,
    rip,
    run,
    u3_decompose,
)

__all__ = [
    "PceError",
    "assemble",
    "cmd",
    "debinarize",
    "dequantize_phase",
    "disassemble",
    "generate",
    "generate_spec",
    "identify",
    "normalize_circuit",
    "peel",
    "quantize_phase",
    "rip",
    "run",
    "u3_decompose",
]
