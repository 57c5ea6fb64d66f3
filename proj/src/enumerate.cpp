#include "epq/enumerate.hpp"

#include <string>
#include <utility>

namespace epq {

namespace {

struct Slot {
  const std::string* relation;
  Tuple tuple;
};

std::vector<Slot> all_slots(const Signature& signature, std::size_t n) {
  std::vector<Slot> out;
  for (const auto& [rel, arity] : signature.relations()) {
    Tuple t(static_cast<std::size_t>(arity), 0);
    while (true) {
      out.push_back({&rel, t});
      std::size_t i = t.size();
      while (i > 0 && t[i - 1] + 1 == n) t[--i] = 0;
      if (i == 0) break;
      ++t[i - 1];
    }
  }
  return out;
}

StructureBuilder numbered_builder(const Signature& signature, std::size_t n) {
  StructureBuilder builder(signature);
  for (std::size_t i = 0; i < n; ++i) builder.add_element(std::to_string(i));
  return builder;
}

}  // namespace

std::size_t tuple_slots(const Signature& signature, std::size_t n) {
  std::size_t total = 0;
  for (const auto& [rel, arity] : signature.relations()) {
    std::size_t p = 1;
    for (int i = 0; i < arity; ++i) p *= n;
    total += p;
  }
  return total;
}

bool for_each_structure(const Signature& signature, std::size_t n,
                        const std::function<bool(const Structure&)>& visit) {
  if (n == 0) return true;
  auto slots = all_slots(signature, n);
  const std::size_t m = slots.size();
  for (std::size_t k = 0; k <= m; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      StructureBuilder builder = numbered_builder(signature, n);
      for (std::size_t idx : pick) builder.add_tuple_ids(*slots[idx].relation, slots[idx].tuple);
      if (!visit(std::move(builder).build())) return false;
      // next combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return true;
}

Structure random_structure(const Signature& signature, std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  StructureBuilder builder = numbered_builder(signature, n);
  for (const auto& slot : all_slots(signature, n)) {
    if (coin(rng)) builder.add_tuple_ids(*slot.relation, slot.tuple);
  }
  return std::move(builder).build();
}

}  // namespace epq
