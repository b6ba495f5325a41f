#ifndef DOCSYNTH_TEXT_METRICS_HPP
#define DOCSYNTH_TEXT_METRICS_HPP

#include <string>

namespace docsynth {

struct BlockExtent {
    int width = 0;
    int height = 0;
    int line_count = 0;
};

// Text-measurement capability used by the layout engine. Production code
// plugs in the font engine; tests may substitute fixed-size stub metrics.
class TextMeasurer {
public:
    virtual ~TextMeasurer() = default;
    // Extent of a (possibly multi-line) text block in the given face/size.
    virtual BlockExtent measure_block(const std::string& text, const std::string& face,
                                      int size_px) const = 0;
};

} // namespace docsynth

#endif
