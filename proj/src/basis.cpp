#include "inkmetrics/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

namespace {

using Real = boost::multiprecision::cpp_bin_float_100;
using Vec = std::vector<Real>;
using Mat = std::vector<Vec>;

// <s^i, s^j> = 1/(i+j+1) + mu * i*j/(i+j-1)
Mat monomial_gram(int degree, const Real& mu) {
  const int n = degree + 1;
  Mat g(n, Vec(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g[i][j] = Real(1) / Real(i + j + 1);
      if (i > 0 && j > 0) g[i][j] += mu * Real(i * j) / Real(i + j - 1);
    }
  }
  return g;
}

Real inner(const Mat& gram, const Vec& a, const Vec& b) {
  Real sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    Real row = 0;
    for (std::size_t j = 0; j < b.size(); ++j) row += gram[i][j] * b[j];
    sum += a[i] * row;
  }
  return sum;
}

// Modified Gram-Schmidt with a second full pass.
Mat orthonormalize_monomials(const Mat& gram) {
  const std::size_t n = gram.size();
  Mat q;
  q.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec v(n, Real(0));
    v[i] = 1;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qj : q) {
        const Real r = inner(gram, v, qj);
        for (std::size_t k = 0; k < n; ++k) v[k] -= r * qj[k];
      }
    }
    const Real norm = sqrt(inner(gram, v, v));
    for (auto& c : v) c /= norm;
    q.push_back(std::move(v));
  }
  return q;
}

Real binomial(int n, int k) {
  Real r = 1;
  for (int i = 1; i <= k; ++i) r = r * Real(n - k + i) / Real(i);
  return r;
}

// Monomial coefficients of L_k(s) = sqrt(2k+1) P_k(2s-1):
//   P_k(2s-1) = sum_j (-1)^(k+j) C(k,j) C(k+j,j) s^j
Mat shifted_legendre_monomials(int degree) {
  Mat out(degree + 1, Vec(degree + 1, Real(0)));
  for (int k = 0; k <= degree; ++k) {
    const Real norm = sqrt(Real(2 * k + 1));
    for (int j = 0; j <= k; ++j) {
      const Real c = binomial(k, j) * binomial(k + j, j);
      out[k][j] = ((k + j) % 2 == 0 ? c : -c) * norm;
    }
  }
  return out;
}

}  // namespace

std::string BasisKey::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "LS(d=" << degree << ", mu=" << mu << ")";
  return os.str();
}

LSBasis::LSBasis(int degree, double mu) : key_{degree, mu} {
  if (degree < kMinDegree || degree > kMaxDegree) {
    throw ConfigError("basis degree " + std::to_string(degree) + " outside supported range [" +
                      std::to_string(kMinDegree) + ", " + std::to_string(kMaxDegree) + "]");
  }
  if (!std::isfinite(mu) || mu < 0.0) throw ConfigError("Sobolev weight mu must be finite and >= 0");

  const Mat q = orthonormalize_monomials(monomial_gram(degree, Real(mu)));
  const Mat leg = shifted_legendre_monomials(degree);
  const int n = degree + 1;

  // Moments int_0^1 s^a s^b ds = 1/(a+b+1) project each B_i onto L_k.
  legendre_.reserve(n);
  monomial_.reserve(n);
  monomial_deriv_.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    for (int k = 0; k <= i; ++k) {
      Real c = 0;
      for (int a = 0; a <= i; ++a) {
        for (int b = 0; b <= k; ++b) c += q[i][a] * leg[k][b] / Real(a + b + 1);
      }
      row[k] = static_cast<double>(c);
    }
    legendre_.emplace_back(std::move(row));

    std::vector<double> mono(n, 0.0), deriv(n > 1 ? n - 1 : 1, 0.0);
    for (int a = 0; a < n; ++a) mono[a] = static_cast<double>(q[i][a]);
    for (int a = 1; a < n; ++a) deriv[a - 1] = static_cast<double>(q[i][a] * a);
    monomial_.push_back(std::move(mono));
    monomial_deriv_.push_back(std::move(deriv));
  }
}

LegendrePoly LSBasis::combine(std::span<const double> coeffs) const {
  std::vector<double> out(size(), 0.0);
  const std::size_t n = std::min(coeffs.size(), size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = legendre_row(i);
    for (std::size_t k = 0; k < row.size(); ++k) out[k] += coeffs[i] * row[k];
  }
  return LegendrePoly(std::move(out));
}

LSBasis build_basis(int degree, double mu) { return LSBasis(degree, mu); }

std::shared_ptr<const LSBasis> shared_basis(int degree, double mu) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const LSBasis>> cache;

  const auto key = std::make_pair(degree, mu);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const LSBasis>(degree, mu);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(built));
  return it->second;
}

}  // namespace inkmetrics
