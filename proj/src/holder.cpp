#include "volterra/holder.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

HolderExponent::HolderExponent(Kind kind, double p, double q, std::string label)
    : kind_(kind), p_(p), q_(q), label_(std::move(label)) {}

HolderExponent HolderExponent::one() {
  return HolderExponent(Kind::one, 1.0, std::numeric_limits<double>::infinity(), "1");
}

HolderExponent HolderExponent::infinity() {
  return HolderExponent(Kind::infinity, std::numeric_limits<double>::infinity(), 1.0, "inf");
}

HolderExponent HolderExponent::from_double(double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("Hölder exponent must lie in [1, inf]");
  if (p == 1.0) return one();
  if (std::isinf(p)) return infinity();
  return HolderExponent(Kind::finite, p, p / (p - 1.0), format_real(p));
}

HolderExponent HolderExponent::from_ratio(long long num, long long den) {
  if (den <= 0 || num < den) throw DomainError("Hölder exponent must be a ratio num/den >= 1");
  const long long g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num == den) return one();
  const double p = static_cast<double>(num) / static_cast<double>(den);
  const double q = static_cast<double>(num) / static_cast<double>(num - den);
  std::string label = den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  return HolderExponent(Kind::finite, p, q, std::move(label));
}

HolderExponent HolderExponent::conjugate() const {
  switch (kind_) {
    case Kind::one:
      return infinity();
    case Kind::infinity:
      return one();
    case Kind::finite:
      break;
  }
  // Keep rational labels rational: p = a/b  ->  q = a/(a-b).
  const auto slash = label_.find('/');
  if (slash != std::string::npos || label_.find_first_not_of("0123456789") == std::string::npos) {
    const long long a = std::stoll(label_.substr(0, slash));
    const long long b = slash == std::string::npos ? 1 : std::stoll(label_.substr(slash + 1));
    return from_ratio(a, a - b);
  }
  return HolderExponent(Kind::finite, q_, p_, format_real(q_));
}

double log_cp_constant(const HolderExponent& p) {
  if (p.kind() != HolderExponent::Kind::finite) return 0.0;
  return -std::log(p.p()) / p.p() - std::log(p.q()) / p.q();
}

double cp_constant(const HolderExponent& p) { return std::exp(log_cp_constant(p)); }

}  // namespace volterra
