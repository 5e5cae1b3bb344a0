#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace hyperwalk {

/// Dense integer handle tagged by element kind. Default-constructed ids are invalid.
template <class Tag>
struct Id {
  std::int32_t value = -1;

  constexpr Id() = default;
  constexpr explicit Id(std::int32_t v) : value(v) {}

  [[nodiscard]] constexpr bool valid() const { return value >= 0; }
  [[nodiscard]] constexpr std::size_t index() const { return static_cast<std::size_t>(value); }

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct VertexTag {};
struct HalfEdgeTag {};
struct FaceTag {};

using VertexId = Id<VertexTag>;
using HalfEdgeId = Id<HalfEdgeTag>;
using FaceId = Id<FaceTag>;

// Face markers for half-edges that do not bound an internal triangle.
inline constexpr FaceId kOuterFace{-1};
inline constexpr FaceId kHoleFace{-2};

}  // namespace hyperwalk

template <class Tag>
struct std::hash<hyperwalk::Id<Tag>> {
  std::size_t operator()(hyperwalk::Id<Tag> id) const noexcept {
    return std::hash<std::int32_t>{}(id.value);
  }
};
