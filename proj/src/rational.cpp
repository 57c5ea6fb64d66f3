#include "epq/rational.hpp"

#include <optional>
#include <set>

#include "epq/errors.hpp"

namespace epq {

std::vector<ExactRational> solve_vandermonde(std::span<const BigInt> nodes, std::span<const BigInt> rhs) {
  const std::size_t n = nodes.size();
  if (rhs.size() != n) throw PreconditionViolation("solve_vandermonde: node and value counts differ");
  if (std::set<BigInt>(nodes.begin(), nodes.end()).size() != n) {
    throw SingularSystem("solve_vandermonde: nodes are not pairwise distinct");
  }
  // Row l: nodes[j]^l, augmented with rhs[l].
  std::vector<std::vector<ExactRational>> m(n, std::vector<ExactRational>(n + 1));
  for (std::size_t j = 0; j < n; ++j) {
    BigInt power = 1;
    for (std::size_t l = 0; l < n; ++l) {
      m[l][j] = ExactRational(power);
      power *= nodes[j];
    }
  }
  for (std::size_t l = 0; l < n; ++l) m[l][n] = ExactRational(rhs[l]);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) throw SingularSystem("solve_vandermonde: singular matrix");
    std::swap(m[pivot], m[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      ExactRational factor = m[r][col] / m[col][col];
      for (std::size_t k = col; k <= n; ++k) m[r][k] -= factor * m[col][k];
    }
  }
  std::vector<ExactRational> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = m[j][n] / m[j][j];
  return out;
}

std::optional<BigInt> as_integer(const ExactRational& q) {
  if (boost::multiprecision::denominator(q) != 1) return std::nullopt;
  return BigInt(boost::multiprecision::numerator(q));
}

}  // namespace epq
