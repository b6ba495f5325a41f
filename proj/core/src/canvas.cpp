#include "docsynth/canvas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <png.h>

namespace docsynth {

Canvas::Canvas(int width, int height, Color background)
    : width_(width), height_(height), px_(std::size_t(width) * height * 3) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("canvas dimensions must be positive");
    fill(background);
}

void Canvas::fill(Color c) {
    for (std::size_t i = 0; i < px_.size(); i += 3) {
        px_[i] = c.r;
        px_[i + 1] = c.g;
        px_[i + 2] = c.b;
    }
}

Color Canvas::pixel(int x, int y) const {
    std::size_t i = (std::size_t(y) * width_ + x) * 3;
    return Color{px_[i], px_[i + 1], px_[i + 2]};
}

void Canvas::set_pixel(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    std::size_t i = (std::size_t(y) * width_ + x) * 3;
    px_[i] = c.r;
    px_[i + 1] = c.g;
    px_[i + 2] = c.b;
}

void Canvas::blend_pixel(int x, int y, Color c, double alpha) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    if (alpha <= 0.0) return;
    if (alpha > 1.0) alpha = 1.0;
    std::size_t i = (std::size_t(y) * width_ + x) * 3;
    auto mix = [&](std::uint8_t dst, std::uint8_t src) {
        return static_cast<std::uint8_t>(std::lround(dst + (src - dst) * alpha));
    };
    px_[i] = mix(px_[i], c.r);
    px_[i + 1] = mix(px_[i + 1], c.g);
    px_[i + 2] = mix(px_[i + 2], c.b);
}

void Canvas::draw_hline(int x0, int x1, int y, Color c) {
    if (x0 > x1) std::swap(x0, x1);
    for (int x = x0; x <= x1; ++x) set_pixel(x, y, c);
}

void Canvas::draw_vline(int x, int y0, int y1, Color c) {
    if (y0 > y1) std::swap(y0, y1);
    for (int y = y0; y <= y1; ++y) set_pixel(x, y, c);
}

void Canvas::draw_rect_outline(const Rect& r, Color c) {
    if (r.empty()) return;
    draw_hline(r.x, r.right() - 1, r.y, c);
    draw_hline(r.x, r.right() - 1, r.bottom() - 1, c);
    draw_vline(r.x, r.y, r.bottom() - 1, c);
    draw_vline(r.right() - 1, r.y, r.bottom() - 1, c);
}

void Canvas::write_png(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open '" + path + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng write failed for '" + path + "'");
    }
    png_init_io(png, fp);
    // Pinned encoder settings keep batch output byte-stable.
    png_set_compression_level(png, 4);
    png_set_filter(png, 0, PNG_FILTER_SUB);
    png_set_IHDR(png, info, width_, height_, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height_; ++y)
        png_write_row(png, const_cast<png_bytep>(px_.data() + std::size_t(y) * width_ * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace docsynth
