#!/usr/bin/env python3
# Copyright 2026 The oidd Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Writes the checked-in OIDT / PNM fixtures with an independent encoder.

The C++ reader is tested against these bytes, so this script deliberately
does not use the library. Re-run only when fixtures are meant to change:

    python3 tests/fixtures/make_fixtures.py
"""

import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent


def oidt(dtype, dims, payload):
    head = b"OIDT" + bytes([1, dtype, len(dims)]) + b"".join(struct.pack("<I", d) for d in dims)
    return head + payload


def floats(values):
    return b"".join(struct.pack("<f", v) for v in values)


def write(name, data):
    (HERE / name).write_bytes(data)


def main():
    # 2x2, N=2: foreground pixels {0.8, 0.6}, BLS = 0.7.
    write("segmap_bls_2x2.oidt", oidt(0, [2, 2, 3], floats([
        0.8, 0.1, 0.1, 0.6, 0.3, 0.1,
        0.1, 0.1, 0.8, 0.2, 0.2, 0.6])))
    # 4x4, N=2, every pixel background.
    write("segmap_all_background_4x4.oidt", oidt(0, [4, 4, 3], floats([0.1, 0.2, 0.7] * 16)))
    # 2x2x4 float needs 64 payload bytes; only 60 present.
    write("truncated_payload.oidt", oidt(0, [2, 2, 4], bytes(60)))
    write("bad_magic.oidt", b"XXXX" + bytes([1, 0, 1]) + struct.pack("<I", 1) + floats([0.0]))
    write("bad_version.oidt", b"OIDT" + bytes([2, 0, 1]) + struct.pack("<I", 1) + floats([0.0]))
    write("zero_dim.oidt", oidt(1, [3, 0], b""))
    write("binary_map_3x2.oidt", oidt(1, [3, 2], bytes([0, 1, 1, 0, 1, 1])))
    write("p6_2x1.ppm", b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 0]))
    write("p5_1x1.pgm", b"P5\n# gray\n1 1\n255\n" + bytes([128]))
    write("p6_maxval16.ppm", b"P6\n1 1\n65535\n" + bytes(6))
    write("p3_ascii.ppm", b"P3\n1 1\n255\n0 0 0\n")


if __name__ == "__main__":
    main()
