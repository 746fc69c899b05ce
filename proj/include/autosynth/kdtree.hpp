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


// Static 3-d tree for exact nearest-neighbor queries.

#ifndef AUTOSYNTH_KDTREE_HPP_
#define AUTOSYNTH_KDTREE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "autosynth/geometry.hpp"

namespace autosynth {

class KdTree {
 public:
  struct Hit {
    std::uint32_t index = 0;
    double squared_distance = 0.0;
  };

  explicit KdTree(std::span<const Vec3> points);

  // Nearest point; among equidistant points the lowest index wins, which
  // matches a brute-force scan with strict comparison.
  Hit nearest(const Vec3& query) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // range into order_ for leaves
    std::int32_t left = -1, right = -1;
    int axis = -1;                     // -1 for leaves
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  void search(std::int32_t node, const Vec3& q, Hit& best) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace autosynth

#endif  // AUTOSYNTH_KDTREE_HPP_
