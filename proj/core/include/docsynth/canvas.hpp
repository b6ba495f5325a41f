#ifndef DOCSYNTH_CANVAS_HPP
#define DOCSYNTH_CANVAS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "docsynth/geometry.hpp"

namespace docsynth {

// RGB8 pixel buffer, top-left origin.
class Canvas {
public:
    Canvas(int width, int height, Color background = Color{255, 255, 255});

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<std::uint8_t>& pixels() const { return px_; }

    Color pixel(int x, int y) const;
    void set_pixel(int x, int y, Color c);
    // Source-over blend with coverage alpha in [0,1]; out-of-bounds ignored.
    void blend_pixel(int x, int y, Color c, double alpha);

    void fill(Color c);
    void draw_hline(int x0, int x1, int y, Color c);
    void draw_vline(int x, int y0, int y1, Color c);
    void draw_rect_outline(const Rect& r, Color c);

    // Lossless RGB PNG, fixed encoder settings so output bytes are
    // reproducible run to run.
    void write_png(const std::string& path) const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> px_;
};

} // namespace docsynth

#endif
