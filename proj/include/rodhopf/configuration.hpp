#pragma once

#include <Eigen/Dense>

#include "rodhopf/grid.hpp"
#include "rodhopf/params.hpp"

namespace rodhopf {

// Rod centreline (x, y) and section angle theta at the grid nodes.
struct Configuration {
  Eigen::VectorXd x, y, theta;

  // Throws ValidationError unless all arrays have length n.
  void check_size(int n) const;
};

struct Strains {
  Eigen::VectorXd h1, h2, pi;
};

struct Stresses {
  Eigen::VectorXd f1, f2, m;
};

// F1 = k1 (h1 - 1), F2 = k2 h2, M = pi.
Stresses constitutive(const Strains& s, const RodParams& p);

// h1 = cos(theta) x' + sin(theta) y', h2 = -sin(theta) x' + cos(theta) y', pi = theta'.
Strains strains(const Configuration& c, const Grid& grid);

// Straight rod compressed by the follower load: x = nu u, y = theta = 0.
Configuration base_state(const RodParams& p, const Grid& grid);

}  // namespace rodhopf
