// Copyright 2026 The AutoSynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUTOSYNTH_ERRORS_HPP_
#define AUTOSYNTH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace autosynth {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AUTOSYNTH_DEFINE_ERROR(Name)        \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// Marching cubes found no sign change, or clipping removed everything.
AUTOSYNTH_DEFINE_ERROR(EmptySurface);
// Linear part of an affine transform is not invertible.
AUTOSYNTH_DEFINE_ERROR(SingularTransform);
// Mesh has zero area, or all of its vertices coincide.
AUTOSYNTH_DEFINE_ERROR(DegenerateMesh);
// Rasterization covered no pixel.
AUTOSYNTH_DEFINE_ERROR(NothingVisible);
// Depth map without a single hit pixel.
AUTOSYNTH_DEFINE_ERROR(EmptyDepth);
// Object generation kept producing empty meshes.
AUTOSYNTH_DEFINE_ERROR(RetryExhausted);
// File could not be read or written; message carries the path.
AUTOSYNTH_DEFINE_ERROR(IoError);
// Point clouds of different sizes where equal sizes are required.
AUTOSYNTH_DEFINE_ERROR(SizeMismatch);
// Inputs inconsistent with the surrogate model shape.
AUTOSYNTH_DEFINE_ERROR(ShapeMismatch);
// Training produced a NaN or infinite loss.
AUTOSYNTH_DEFINE_ERROR(NonFinite);
// A value violates a documented precondition or invariant.
AUTOSYNTH_DEFINE_ERROR(InvalidArgument);

#undef AUTOSYNTH_DEFINE_ERROR

}  // namespace autosynth

#endif  // AUTOSYNTH_ERRORS_HPP_
