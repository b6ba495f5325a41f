#ifndef DOCSYNTH_FONT_HPP
#define DOCSYNTH_FONT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "docsynth/text_metrics.hpp"

namespace docsynth {

// Quadratic outline of one glyph in font units (y up).
struct GlyphOutline {
    struct Contour {
        // Flattened to line segments happens at raster time; points here are
        // the on-curve/off-curve sequence from the font.
        std::vector<float> xs;
        std::vector<float> ys;
        std::vector<bool> on_curve;
    };
    std::vector<Contour> contours;
};

struct GlyphBox {
    int x_min = 0, y_min = 0, x_max = 0, y_max = 0;
    bool empty = true;
};

// Minimal TrueType (glyf-outline) font reader: enough of head/maxp/hhea/
// hmtx/cmap/loca/glyf to shape and rasterize Latin text deterministically.
class TrueTypeFont {
public:
    static std::unique_ptr<TrueTypeFont> load(const std::string& path, std::string name);

    const std::string& name() const { return name_; }
    int units_per_em() const { return units_per_em_; }
    int ascent_units() const { return ascent_; }
    int descent_units() const { return descent_; } // positive magnitude
    int line_gap_units() const { return line_gap_; }

    // 0 when the font has no mapping for the codepoint.
    std::uint16_t glyph_index(std::uint32_t codepoint) const;
    int advance_units(std::uint16_t glyph) const;
    GlyphBox glyph_box(std::uint16_t glyph) const;
    // Composite glyphs are resolved; result is plain contours in font units.
    GlyphOutline glyph_outline(std::uint16_t glyph) const;

private:
    TrueTypeFont() = default;
    void append_outline(std::uint16_t glyph, GlyphOutline& out, float a, float b, float c,
                        float d, float dx, float dy, int depth) const;
    bool glyph_range(std::uint16_t glyph, std::uint32_t& begin, std::uint32_t& end) const;

    std::string name_;
    std::vector<std::uint8_t> data_;
    int units_per_em_ = 2048;
    int ascent_ = 0;
    int descent_ = 0;
    int line_gap_ = 0;
    std::uint16_t num_glyphs_ = 0;
    std::uint16_t num_hmetrics_ = 0;
    std::uint32_t hmtx_ = 0;
    std::uint32_t loca_ = 0;
    std::uint32_t glyf_ = 0;
    std::uint32_t cmap_sub_ = 0; // offset of the chosen cmap subtable
    int cmap_format_ = 0;
    bool long_loca_ = false;
};

// All faces found in one directory (*.ttf, sorted by filename). Faces are
// immutable after load and safe to share across generation workers.
class FontLibrary {
public:
    // Throws std::runtime_error when the directory has no loadable .ttf.
    static FontLibrary load_dir(const std::string& dir);

    std::vector<std::string> face_names() const;
    // Throws std::runtime_error for unknown names.
    const TrueTypeFont& face(const std::string& name) const;
    bool has_face(const std::string& name) const;
    // Pan-Unicode fallback for codepoints the selected face lacks.
    const TrueTypeFont& fallback() const;

private:
    std::vector<std::unique_ptr<TrueTypeFont>> faces_;
    const TrueTypeFont* fallback_ = nullptr;
};

// ---- Shaping ----------------------------------------------------------
//
// One code path produces both measurement extents and draw positions, so
// layout and rendering can never disagree about geometry.

struct ShapedGlyph {
    const TrueTypeFont* face;
    std::uint16_t glyph;
    double x;     // pen offset in px from line origin
    double scale; // px per font unit for this face
};

struct ShapedToken {
    std::string text;
    std::vector<ShapedGlyph> glyphs;
    double pen_start = 0;
    double pen_end = 0;
    double ink_min = 0; // horizontal ink extent, px from line origin
    double ink_max = 0;
    bool has_ink = false;
};

struct ShapedLine {
    std::vector<ShapedToken> tokens;
    std::string text;    // tokens joined with single spaces
    double ink_min = 0;  // leftmost ink px
    double ink_max = 0;
    int ascent = 0;  // final line box above baseline, px (ink-expanded)
    int descent = 0; // below baseline
    int span() const;
    int height() const { return ascent + descent; }
};

struct ShapedBlock {
    std::vector<ShapedLine> lines;
    std::string normalized_text; // lines joined with '\n'
    int width = 0;               // max line span
    int height = 0;              // sum of line heights
};

// Splits text into lines on '\n' and words on blanks (no empty tokens),
// shapes each line in `face_name` at `size_px`, with inter-word gaps of
// space-advance * space_weight. Unknown codepoints fall back to the
// library fallback face (warned once per codepoint on stderr).
ShapedBlock shape_block(const FontLibrary& library, const std::string& face_name, int size_px,
                        double space_weight, const std::string& text);

// Metric-only line height (ascent+descent) for empty runs.
int line_height_px(const TrueTypeFont& face, int size_px);

// TextMeasurer backed by the shaping engine; what production layout uses.
class FontMeasurer : public TextMeasurer {
public:
    FontMeasurer(const FontLibrary& library, double space_weight)
        : library_(library), space_weight_(space_weight) {}

    BlockExtent measure_block(const std::string& text, const std::string& face,
                              int size_px) const override;

private:
    const FontLibrary& library_;
    double space_weight_;
};

} // namespace docsynth

#endif
