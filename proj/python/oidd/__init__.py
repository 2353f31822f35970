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

"""Python bindings for the oidd C++ library."""

from ._oidd import (
    OiddError,
    auroc,
    bls,
    calibrate_epsilon,
    felzenszwalb,
    n_r,
    read_oidt,
    ssim,
    tnr_at_tpr,
    v_score,
    write_oidt,
)

__all__ = [
    "OiddError",
    "auroc",
    "bls",
    "calibrate_epsilon",
    "felzenszwalb",
    "n_r",
    "read_oidt",
    "ssim",
    "tnr_at_tpr",
    "v_score",
    "write_oidt",
]
