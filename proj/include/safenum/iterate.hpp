#pragma once

#include <functional>
#include <vector>

#include "safenum/problem.hpp"

namespace safenum {

// One realized round: the dual vector that was posted and the demand it induced.
struct Iterate {
  int t = 0;
  const Vector& lambda;
  const Vector& x;
};

// Receives every round of a trial, in order of t.
using IterateSink = std::function<void(const Iterate&)>;

// Full record of a trial's posted duals and realized demands, indexed by t - 1.
struct IterateHistory {
  std::vector<Vector> lambda;
  std::vector<Vector> x;

  std::size_t size() const { return x.size(); }
  IterateSink sink() {
    return [this](const Iterate& it) {
      lambda.push_back(it.lambda);
      x.push_back(it.x);
    };
  }
};

}  // namespace safenum
