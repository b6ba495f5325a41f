#ifndef DOCSYNTH_GEOMETRY_HPP
#define DOCSYNTH_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <string>

namespace docsynth {

// Integer pixel rectangle, top-left origin.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    bool empty() const { return w <= 0 || h <= 0; }

    bool contains(const Rect& other) const {
        return other.x >= x && other.y >= y &&
               other.right() <= right() && other.bottom() <= bottom();
    }

    bool intersects(const Rect& other) const {
        return x < other.right() && other.x < right() &&
               y < other.bottom() && other.y < bottom();
    }

    // Area of overlap; 0 when disjoint.
    long long intersection_area(const Rect& other) const {
        long long ox = std::max(0, std::min(right(), other.right()) - std::max(x, other.x));
        long long oy = std::max(0, std::min(bottom(), other.bottom()) - std::max(y, other.y));
        return ox * oy;
    }

    static Rect bounding_union(const Rect& a, const Rect& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        int nx = std::min(a.x, b.x);
        int ny = std::min(a.y, b.y);
        int nr = std::max(a.right(), b.right());
        int nb = std::max(a.bottom(), b.bottom());
        return {nx, ny, nr - nx, nb - ny};
    }

    bool operator==(const Rect&) const = default;
};

struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Color&) const = default;
};

// Accepts "#RRGGBB" or "RRGGBB". Throws std::invalid_argument otherwise.
Color parse_color(const std::string& text);
std::string color_to_hex(const Color& c);

enum class Alignment { Left, Center, Right };

const char* to_string(Alignment a);
// Throws std::invalid_argument for anything but "left"/"center"/"right".
Alignment alignment_from_string(const std::string& s);

// Offset that places a box of `width` inside `avail` per the alignment.
inline int aligned_offset(Alignment a, int avail, int width) {
    int slack = std::max(0, avail - width);
    switch (a) {
        case Alignment::Left: return 0;
        case Alignment::Center: return slack / 2;
        case Alignment::Right: return slack;
    }
    return 0;
}

} // namespace docsynth

#endif
