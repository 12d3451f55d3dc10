#include "rodhopf/configuration.hpp"

#include <sstream>

#include "rodhopf/errors.hpp"

namespace rodhopf {

void Configuration::check_size(int n) const {
  if (x.size() != n || y.size() != n || theta.size() != n) {
    std::ostringstream msg;
    msg << "configuration arrays must have length " << n << " (got " << x.size() << ", "
        << y.size() << ", " << theta.size() << ")";
    throw ValidationError(msg.str());
  }
}

Stresses constitutive(const Strains& s, const RodParams& p) {
  return {p.k1() * (s.h1.array() - 1.0).matrix(), p.k2() * s.h2, s.pi};
}

Strains strains(const Configuration& c, const Grid& grid) {
  c.check_size(grid.size());
  const Eigen::VectorXd xu = grid.diff1() * c.x;
  const Eigen::VectorXd yu = grid.diff1() * c.y;
  const Eigen::ArrayXd cs = c.theta.array().cos(), sn = c.theta.array().sin();
  Strains s;
  s.h1 = (cs * xu.array() + sn * yu.array()).matrix();
  s.h2 = (-sn * xu.array() + cs * yu.array()).matrix();
  s.pi = grid.diff1() * c.theta;
  return s;
}

Configuration base_state(const RodParams& p, const Grid& grid) {
  const int n = grid.size();
  return {p.nu() * grid.nodes(), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

}  // namespace rodhopf
