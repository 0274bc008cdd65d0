#pragma once

#include <Eigen/Dense>

#include "eccar/errors.hpp"

namespace eccar {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Paired observation matrices; rows of x and y are joint samples.
struct Dataset {
  Matrix x;  // n x p
  Matrix y;  // n x q

  Index n() const { return x.rows(); }
  Index p() const { return x.cols(); }
  Index q() const { return y.cols(); }

  void validate() const {
    if (x.rows() != y.rows())
      throw InvalidData("dataset: X has " + std::to_string(x.rows()) +
                        " rows but Y has " + std::to_string(y.rows()));
    if (x.rows() < 2) throw InvalidData("dataset: need at least 2 samples");
    if (!x.allFinite() || !y.allFinite())
      throw InvalidData("dataset: non-finite entries");
  }
};

}  // namespace eccar
