#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace tilr {

template <typename Tag>
struct StrongId {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}
  constexpr explicit StrongId(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit StrongId(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

using EntityId = StrongId<struct EntityTag>;
using PredicateId = StrongId<struct PredicateTag>;
using EventId = StrongId<struct EventTag>;

}  // namespace tilr

template <typename Tag>
struct std::hash<tilr::StrongId<Tag>> {
  std::size_t operator()(tilr::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
