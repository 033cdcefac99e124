#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lamq/features.hpp"

namespace lamq {

/// A sequence of frames of `frame_dim` values each, stored contiguously.
struct SequenceView {
  std::span<const double> data;
  std::size_t frame_dim = 1;

  std::size_t length() const noexcept { return frame_dim == 0 ? 0 : data.size() / frame_dim; }
  std::span<const double> frame(std::size_t i) const noexcept {
    return data.subspan(i * frame_dim, frame_dim);
  }
};

/// Classic DTW: Euclidean frame cost, steps (1,0), (0,1), (1,1).
/// Throws InvalidArgument for empty sequences or mismatched frame sizes.
double dtw_distance(SequenceView a, SequenceView b);

struct DtwModel {
  /// Mean positive sequence, frame-major.
  std::vector<double> templ;
  std::size_t frame_dim = 1;
  /// Largest DTW distance from a training positive to the template.
  double threshold = 0.0;

  std::size_t length() const noexcept { return templ.size() / frame_dim; }
  SequenceView template_view() const noexcept { return {templ, frame_dim}; }

  /// threshold - dtw_distance(x, template)
  double score(std::span<const double> x) const;
};

/// Rows of `positives` are frame-major sequences of equal length.
DtwModel dtw_train(const FeatureMatrix& positives, std::size_t frame_dim);

}  // namespace lamq
