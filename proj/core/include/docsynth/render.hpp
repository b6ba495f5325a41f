#ifndef DOCSYNTH_RENDER_HPP
#define DOCSYNTH_RENDER_HPP

#include <string>
#include <vector>

#include "docsynth/canvas.hpp"
#include "docsynth/font.hpp"
#include "docsynth/layout.hpp"

namespace docsynth {

// One rendered word: no internal whitespace, box tight around the glyph run
// horizontally and spanning the line box vertically.
struct RenderedToken {
    std::string text;
    Rect box;
};

// One drawn text piece (value, entity header or group header) with exact
// geometry. `box` is the bounding union of the token boxes; joining token
// texts with single spaces per line reconstructs `value`.
struct RenderedEntity {
    std::string label; // owning entity name (group name for group headers)
    TextRole role = TextRole::Value;
    std::string value;
    Rect box;
    std::vector<RenderedToken> tokens;
};

struct RenderResult {
    Canvas canvas;
    std::vector<RenderedEntity> entities;
};

struct TokenizedText {
    std::vector<std::vector<std::string>> lines; // words per line, no empties
    std::vector<std::string> flat() const;
};

// Whitespace split preserving newline boundaries as line breaks.
TokenizedText tokenize_words(const std::string& value);

// Draws every placed group onto a fresh canvas and records word-level
// geometry. Empty table cells paint nothing and yield no entities. With
// `debug_overlay`, group rectangles and entity boxes are outlined in red
// (diagnostic output only).
RenderResult render_document(const DocumentInstance& instance, const LayoutPlan& plan,
                             const FontLibrary& fonts, const StructuralConfig& st,
                             bool debug_overlay = false);

} // namespace docsynth

#endif
