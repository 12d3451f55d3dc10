#pragma once

#include <string>

#include <json.hpp>

namespace rodhopf {

// Dimensionless rod parameters. Bending stiffness and transverse drag are 1.
class RodParams {
 public:
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double gamma1() const { return gamma1_; }
  double gamma3() const { return gamma3_; }
  double force() const { return force_; }

  // Base-state compression 1 - F/k1, always recomputed.
  double nu() const { return 1.0 - force_ / k1_; }
  // Coupling k2*nu + F of the transverse equations.
  double mu() const { return k2_ * nu() + force_; }
  bool isotropic() const { return k1_ == k2_; }

  RodParams with_force(double force) const;

  nlohmann::json to_json() const;
  static RodParams from_json(const nlohmann::json& doc);

  bool operator==(const RodParams&) const = default;

 private:
  friend RodParams make_params(double, double, double, double, double);
  RodParams(double k1, double k2, double g1, double g3, double f)
      : k1_(k1), k2_(k2), gamma1_(g1), gamma3_(g3), force_(f) {}

  double k1_, k2_, gamma1_, gamma3_, force_;
};

// Throws ValidationError for non-positive stiffness or drag, or non-finite force.
RodParams make_params(double k1_tilde, double k2_tilde, double gamma1_tilde,
                      double gamma3_tilde, double force_tilde);

RodParams isotropic_params(double kappa, double gamma1_tilde, double gamma3_tilde,
                           double force_tilde);

// kappa = 1e4, gamma1 = 1/2, gamma3 = 1e-4.
RodParams reference_params(double force_tilde);

// Diagonal friction weights (gamma1, 1, gamma3).
struct GammaWeights {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 1.0;

  static GammaWeights from(const RodParams& p) { return {p.gamma1(), 1.0, p.gamma3()}; }
};

}  // namespace rodhopf
