#include "roadseg/rotation.hpp"

#include <cmath>

namespace roadseg {

RotatedCoord rotate_coords(double u, double v, double center_u, double center_v, double gamma) {
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);
    const double x = u - center_u;
    const double y = v - center_v;
    return {x * c + y * s, y * c - x * s};
}

DisparityImage rotate_map(const DisparityImage& map, double gamma) {
    if (gamma == 0.0) {
        return map;
    }
    const int w = map.width();
    const int h = map.height();
    const double cu = map.center_u();
    const double cv = map.center_v();
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);

    DisparityImage out(w, h);
    for (int v = 0; v < h; ++v) {
        const double y = static_cast<double>(v) - cv;
        for (int u = 0; u < w; ++u) {
            const double x = static_cast<double>(u) - cu;
            // Inverse rotation of the destination offset locates the source.
            const double su = x * c - y * s + cu;
            const double sv = y * c + x * s + cv;
            const long si = std::lround(su);
            const long sj = std::lround(sv);
            if (si < 0 || si >= w || sj < 0 || sj >= h) {
                continue;  // rotated out of frame
            }
            const int iu = static_cast<int>(si);
            const int iv = static_cast<int>(sj);
            if (map.is_valid(iu, iv)) {
                out.set(u, v, map.at(iu, iv));
            }
        }
    }
    return out;
}

}  // namespace roadseg
