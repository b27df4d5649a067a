#pragma once

#include "aquasi/image.hpp"

#include <cstddef>

namespace aquasi::synthetic {

/// Deterministic piecewise-constant test scene: background, two rectangles and a disc,
/// laid out relative to the image size.
Image piecewise_constant(std::size_t width, std::size_t height);

/// Horizontal linear ramp from 0 (left) to 1 (right).
Image ramp(std::size_t width, std::size_t height);

}  // namespace aquasi::synthetic
