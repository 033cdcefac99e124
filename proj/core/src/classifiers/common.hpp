#pragma once

#include <span>
#include <string>

#include "lamq/error.hpp"
#include "lamq/features.hpp"

namespace lamq::detail {

inline void require_rows(const FeatureMatrix& x, std::span<const Label> y) {
  if (x.rows() != y.size()) {
    throw InvalidArgument("have " + std::to_string(x.rows()) + " feature rows but " +
                          std::to_string(y.size()) + " labels");
  }
}

inline void require_both_classes(std::span<const Label> y) {
  bool good = false, bad = false;
  for (Label l : y) (l == Label::Good ? good : bad) = true;
  if (!good || !bad) throw InvalidArgument("training data must contain both classes");
}

inline void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw InvalidArgument("dimension mismatch: model expects " + std::to_string(expected) +
                          ", got " + std::to_string(got));
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace lamq::detail
