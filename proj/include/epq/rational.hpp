#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <vector>

#include "epq/bigint.hpp"

namespace epq {

/// Reduced fraction with positive denominator.
using ExactRational = boost::multiprecision::cpp_rational;

/// Solves sum_j nodes[j]^l * c_j = rhs[l] for l = 0..n-1 by exact Gaussian
/// elimination. Throws SingularSystem on repeated nodes.
std::vector<ExactRational> solve_vandermonde(std::span<const BigInt> nodes, std::span<const BigInt> rhs);

/// The integer value of `q`, or nullopt if it is not integral.
std::optional<BigInt> as_integer(const ExactRational& q);

}  // namespace epq
