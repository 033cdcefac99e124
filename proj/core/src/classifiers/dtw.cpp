#include "lamq/classifiers/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"

namespace lamq {

namespace {

double frame_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

double dtw_distance(SequenceView a, SequenceView b) {
  if (a.frame_dim == 0 || a.frame_dim != b.frame_dim) {
    throw InvalidArgument("dtw frame dimensions differ: " + std::to_string(a.frame_dim) + " vs " +
                          std::to_string(b.frame_dim));
  }
  if (a.data.size() % a.frame_dim != 0 || b.data.size() % b.frame_dim != 0) {
    throw InvalidArgument("dtw sequence length is not a multiple of the frame dimension");
  }
  const std::size_t n = a.length();
  const std::size_t m = b.length();
  if (n == 0 || m == 0) throw InvalidArgument("dtw on an empty sequence");

  // Two rolling rows of the cumulative cost table.
  std::vector<double> prev(m), curr(m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fa = a.frame(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double cost = frame_distance(fa, b.frame(j));
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = curr[j - 1];
      } else if (j == 0) {
        best = prev[j];
      } else {
        best = std::min({prev[j], curr[j - 1], prev[j - 1]});
      }
      curr[j] = cost + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

double DtwModel::score(std::span<const double> x) const {
  detail::require_dim(templ.size(), x.size());
  return threshold - dtw_distance({x, frame_dim}, template_view());
}

DtwModel dtw_train(const FeatureMatrix& positives, std::size_t frame_dim) {
  if (positives.rows() == 0) throw InvalidArgument("dtw needs at least one positive sample");
  if (frame_dim == 0 || positives.cols() % frame_dim != 0 || positives.cols() == 0) {
    throw InvalidArgument("dtw rows must hold whole frames of dimension " +
                          std::to_string(frame_dim));
  }
  DtwModel model;
  model.frame_dim = frame_dim;
  model.templ.assign(positives.cols(), 0.0);
  for (std::size_t i = 0; i < positives.rows(); ++i) {
    auto row = positives.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) model.templ[k] += row[k];
  }
  for (double& v : model.templ) v /= static_cast<double>(positives.rows());

  model.threshold = 0.0;
  for (std::size_t i = 0; i < positives.rows(); ++i) {
    model.threshold =
        std::max(model.threshold, dtw_distance({positives.row(i), frame_dim}, model.template_view()));
  }
  return model;
}

}  // namespace lamq
