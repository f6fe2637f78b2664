#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spintrace {

// Spacetime index slots. Four flavors:
//   Concrete : a fixed value in {1,2,3,4}
//   Free     : a named open index (nu1, mu, ...)
//   Xi       : a component of the unit vector xi, to be angular-averaged
//   Dummy    : a contracted pair label, always exactly two occurrences
enum class IdxKind : uint8_t { Concrete = 0, Xi = 1, Free = 2, Dummy = 3 };

struct Idx {
  uint32_t bits = 0;

  IdxKind kind() const { return static_cast<IdxKind>(bits >> 24); }
  uint32_t payload() const { return bits & 0x00ffffffu; }

  bool operator==(const Idx& o) const { return bits == o.bits; }
  bool operator!=(const Idx& o) const { return bits != o.bits; }
  bool operator<(const Idx& o) const { return bits < o.bits; }
};

inline Idx make_idx(IdxKind k, uint32_t payload) {
  return Idx{(static_cast<uint32_t>(k) << 24) | (payload & 0x00ffffffu)};
}

// value in 1..4
inline Idx concrete(int value) {
  if (value < 1 || value > 4) throw std::domain_error("index value out of range 1..4");
  return make_idx(IdxKind::Concrete, static_cast<uint32_t>(value - 1));
}
inline int concrete_value(Idx i) { return static_cast<int>(i.payload()) + 1; }

inline Idx xi_slot(uint32_t slot) { return make_idx(IdxKind::Xi, slot); }
inline Idx dummy(uint32_t id) { return make_idx(IdxKind::Dummy, id); }

namespace detail {
// interned free-index names; guarded so expression building stays safe
// from concurrent evaluation threads
inline std::mutex& name_mutex() {
  static std::mutex m;
  return m;
}
inline std::vector<std::string>& free_names() {
  static std::vector<std::string> names;
  return names;
}
inline std::map<std::string, uint32_t>& free_ids() {
  static std::map<std::string, uint32_t> ids;
  return ids;
}
}  // namespace detail

inline Idx free_idx(const std::string& name) {
  std::lock_guard<std::mutex> lock(detail::name_mutex());
  auto& ids = detail::free_ids();
  auto it = ids.find(name);
  if (it != ids.end()) return make_idx(IdxKind::Free, it->second);
  uint32_t id = static_cast<uint32_t>(detail::free_names().size());
  detail::free_names().push_back(name);
  ids.emplace(name, id);
  return make_idx(IdxKind::Free, id);
}

inline std::string idx_name(Idx i) {
  switch (i.kind()) {
    case IdxKind::Concrete:
      return std::to_string(concrete_value(i));
    case IdxKind::Xi:
      return "xi" + std::to_string(i.payload());
    case IdxKind::Free: {
      std::lock_guard<std::mutex> lock(detail::name_mutex());
      return detail::free_names().at(i.payload());
    }
    case IdxKind::Dummy:
      return "d" + std::to_string(i.payload());
  }
  return "?";
}

}  // namespace spintrace
