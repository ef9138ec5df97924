#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace lor {

// Opaque 64-bit identifiers, one strong type per entity kind. Ids are never
// reused within a run and are totally ordered so that every iteration in the
// engine has a deterministic tie-break.
template <class Tag>
struct Id {
  std::uint64_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
};

using TraderId = Id<struct TraderIdTag>;
using CoinId = Id<struct CoinIdTag>;
using RingId = Id<struct RingIdTag>;
using FractalId = Id<struct FractalIdTag>;

// Monotone id source, one per kind per simulation run.
template <class IdT>
class IdAllocator {
 public:
  IdT next() { return IdT{++last_}; }
  std::uint64_t issued() const { return last_; }

 private:
  std::uint64_t last_ = 0;
};

}  // namespace lor

template <class Tag>
struct std::hash<lor::Id<Tag>> {
  std::size_t operator()(const lor::Id<Tag>& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
