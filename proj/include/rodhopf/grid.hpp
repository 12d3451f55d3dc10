#pragma once

#include <memory>

#include <Eigen/Dense>

namespace rodhopf {

using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LdVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Chebyshev-Gauss-Lobatto nodes on u in [0,1], u[0] = 0, u[n-1] = 1.
// Shares its matrices between copies; immutable.
class Grid {
 public:
  explicit Grid(int n = 96);

  int size() const { return n_; }
  const Eigen::VectorXd& nodes() const { return data_->nodes; }
  const Eigen::MatrixXd& diff1() const { return data_->d1; }
  // diff1 * diff1, formed in extended precision.
  const Eigen::MatrixXd& diff2() const { return data_->d2; }
  // Clenshaw-Curtis weights on [0,1].
  const Eigen::VectorXd& quad_weights() const { return data_->w; }
  // (Q g)_i = integral of the interpolant of g from 0 to u_i.
  const Eigen::MatrixXd& cumulative_integral() const { return data_->q; }

  const LdVector& nodes_ld() const { return data_->nodes_ld; }
  const LdMatrix& diff1_ld() const { return data_->d1_ld; }
  const LdMatrix& diff2_ld() const { return data_->d2_ld; }

  bool operator==(const Grid& other) const { return n_ == other.n_; }

 private:
  struct Data {
    Eigen::VectorXd nodes, w;
    Eigen::MatrixXd d1, d2, q;
    LdVector nodes_ld;
    LdMatrix d1_ld, d2_ld;
  };
  int n_;
  std::shared_ptr<const Data> data_;
};

}  // namespace rodhopf
