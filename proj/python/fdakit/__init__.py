# Copyright 2026 The fdakit Authors. All Rights Reserved.
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
"""Fourier domain adaptation, multi-model label fusion and segmentation evaluation."""

from fdakit._core import (
    DEFAULT_BETAS,
    BetaMask,
    BudgetError,
    DataError,
    DimensionError,
    DomainError,
    FdakitError,
    FormatError,
    IoError,
    ParameterError,
    PreconditionError,
    argmax_labels,
    beta_sweep,
    build_mask,
    class_iou,
    confusion_matrix,
    fft2,
    fuse,
    ifft2,
    load_probmap,
    mbt_mean,
    mean_iou,
    pseudo_labels,
    relative_error,
    run_cli,
    spectral_transfer,
    store_probmap,
)

IGNORE_LABEL = 255

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
