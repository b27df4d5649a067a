#include "aquasi/synthetic.hpp"

namespace aquasi::synthetic {

Image piecewise_constant(std::size_t width, std::size_t height) {
    Image img(width, height, 0.2);
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double fx = (static_cast<double>(x) + 0.5) / w;
            const double fy = (static_cast<double>(y) + 0.5) / h;
            double v = 0.2;
            if (fx > 0.15 && fx < 0.45 && fy > 0.1 && fy < 0.6) v = 0.8;
            if (fx > 0.1 && fx < 0.9 && fy > 0.72 && fy < 0.88) v = 0.35;
            const double dx = fx - 0.7;
            const double dy = fy - 0.35;
            if (dx * dx + dy * dy < 0.04) v = 0.6;
            img.at(x, y) = v;
        }
    }
    return img;
}

Image ramp(std::size_t width, std::size_t height) {
    Image img(width, height);
    const double denom = width > 1 ? static_cast<double>(width - 1) : 1.0;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) img.at(x, y) = static_cast<double>(x) / denom;
    }
    return img;
}

}  // namespace aquasi::synthetic
