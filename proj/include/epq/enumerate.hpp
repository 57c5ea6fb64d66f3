#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "epq/structure.hpp"

namespace epq {

/// Number of candidate tuples over a universe of `n` elements.
std::size_t tuple_slots(const Signature& signature, std::size_t n);

/// Visits every structure over `signature` with universe {0..n-1}, ordered by
/// tuple count and then lexicographically on the chosen tuples. Stops early
/// when `visit` returns false; returns false in that case.
bool for_each_structure(const Signature& signature, std::size_t n,
                        const std::function<bool(const Structure&)>& visit);

/// Every tuple slot is present independently with probability `density`.
Structure random_structure(const Signature& signature, std::size_t n, double density, std::mt19937_64& rng);

}  // namespace epq
