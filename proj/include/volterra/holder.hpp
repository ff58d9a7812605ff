#pragma once

#include <string>

namespace volterra {

/// A Hölder exponent p in [1, inf] together with its conjugate q.
///
/// p = 1 and p = inf are distinguished values, not limits of finite
/// floats; every formula branches on them explicitly. Rationals given as
/// num/den keep q = num/(num-den) computed from the integers.
class HolderExponent {
 public:
  enum class Kind { one, finite, infinity };

  static HolderExponent one();
  static HolderExponent infinity();
  /// Any real p >= 1; p == 1 yields one(), p == +inf yields infinity().
  static HolderExponent from_double(double p);
  static HolderExponent from_ratio(long long num, long long den);

  Kind kind() const noexcept { return kind_; }
  bool is_one() const noexcept { return kind_ == Kind::one; }
  bool is_infinity() const noexcept { return kind_ == Kind::infinity; }
  bool is_two() const noexcept { return kind_ == Kind::finite && p_ == 2.0; }

  /// +inf for the infinity kind.
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

  HolderExponent conjugate() const;

  /// "1", "inf", "3/2", "2.5": the form used in CSV/JSON output.
  const std::string& label() const noexcept { return label_; }

 private:
  HolderExponent(Kind kind, double p, double q, std::string label);

  Kind kind_;
  double p_;
  double q_;
  std::string label_;
};

/// C_p = 1 / (p^{1/p} q^{1/q}) for 1 < p < inf, and 1 at both endpoints.
double cp_constant(const HolderExponent& p);
double log_cp_constant(const HolderExponent& p);

}  // namespace volterra
