#pragma once
// Core value types shared across modules.

#include <Eigen/Dense>
#include <vector>

namespace dynkey {

// Rows are frames, columns are feature channels.
using FeatureSequence = Eigen::MatrixXd;

// Soft frame-membership vector in [0,1]^T; binarized it encodes the
// selection of key-frame rows.
struct Indicator {
  Eigen::VectorXd values;
  double threshold = 0.5;

  // Distinct frame indices {i : values_i > threshold}, ascending.
  std::vector<int> binarize() const {
    std::vector<int> out;
    for (int i = 0; i < values.size(); ++i)
      if (values[i] > threshold) out.push_back(i);
    return out;
  }
};

}  // namespace dynkey
