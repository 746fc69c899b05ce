# Copyright 2026 The AutoSynth Authors.
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


"""Procedural shape synthesis and evolutionary search over generation policies."""

from ._core import (
    EmptySurface,
    Error,
    InvalidArgument,
    IoError,
    NonFinite,
    Policy,
    RetryExhausted,
    ShapeMismatch,
    SizeMismatch,
    canonical_mesh,
    chamfer,
    demo_target_mesh,
    generate_dataset,
    primitive_sdf,
    run_cli,
    run_search,
    sample_surface,
    search_space_size,
)

__all__ = [
    "EmptySurface",
    "Error",
    "InvalidArgument",
    "IoError",
    "NonFinite",
    "Policy",
    "RetryExhausted",
    "ShapeMismatch",
    "SizeMismatch",
    "canonical_mesh",
    "chamfer",
    "demo_target_mesh",
    "generate_dataset",
    "primitive_sdf",
    "run_cli",
    "run_search",
    "sample_surface",
    "search_space_size",
]
