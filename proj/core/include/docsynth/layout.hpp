#ifndef DOCSYNTH_LAYOUT_HPP
#define DOCSYNTH_LAYOUT_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "docsynth/geometry.hpp"
#include "docsynth/text_metrics.hpp"
#include "docsynth/values.hpp"

namespace docsynth {

// Raised when no placement satisfying the layout constraints exists; the
// pipeline reacts by regenerating the document from a fresh stream.
class LayoutOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LayoutMode { Grid, RandomBaseline };

const char* to_string(LayoutMode mode);

enum class TextRole { GroupHeader, EntityHeader, Value };

const char* to_string(TextRole role);

// One text block positioned inside a group, in group-local coordinates.
// `x` is where the ink's left edge goes; `width`/`height` are measured
// extents of the block in the resolved font.
struct PlacedBlock {
    TextRole role;
    std::string label; // owning entity name (group name for group headers)
    std::string text;
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    Alignment line_align = Alignment::Left; // alignment of lines within the block
    ResolvedFont font;
};

// Table rule segment in group-local coordinates.
struct SeparatorLine {
    bool horizontal = true;
    int x = 0;
    int y = 0;
    int length = 0;
};

// Complete internal geometry of one laid-out group.
struct GroupLayout {
    int width = 0;
    int height = 0;
    std::vector<PlacedBlock> blocks;
    std::vector<SeparatorLine> separators;
};

// A group measured for grid placement: content extents plus the block
// geometry that produced them.
struct MeasuredGroup {
    const InstanceGroup* group = nullptr;
    GroupLayout content;

    int width() const { return content.width; }
    int height() const { return content.height; }
    const std::string& name() const;
};

// Per-section virtual grid: cell assignments plus content-sized row/column
// extents (gaps are not included in the sizes).
struct VirtualGrid {
    int section_id = 0;
    int rows = 0;
    int cols = 0;
    std::map<std::pair<int, int>, std::string> cells; // (row, col) -> group name
    std::vector<int> row_heights;
    std::vector<int> col_widths;
    // Effective inter-group gaps after the shrink-empty-space pass.
    int gap_y = 0;
    int gap_x = 0;

    bool full() const { return static_cast<int>(cells.size()) >= rows * cols; }
};

struct PlacedGroup {
    const InstanceGroup* group = nullptr;
    GroupLayout content;
    Rect rect;                // canvas coordinates
    int sampled_segment = 0;  // from the frozen permutation
    int final_section = 0;    // where the group actually landed (respill may move it)
    bool pinned = false;
    std::optional<std::pair<int, int>> cell;
};

struct LayoutPlan {
    LayoutMode mode = LayoutMode::Grid;
    std::vector<VirtualGrid> grids;       // populated sections only (grid mode)
    std::vector<PlacedGroup> placements;  // one per group, instance order
    int font_shrink_steps = 0;            // overflow-driven size reduction applied

    const PlacedGroup* find(const std::string& group_name) const;
};

// Horizontal band of section `id` when the canvas is split into
// `num_segments` equal bands.
Rect section_band(const StructuralConfig& st, int id);

// Computes a group's internal geometry (header, stacked entities or table
// cells, separators) and extents. `font_shrink` lowers every font size by
// that many steps, floored at `min_font_size`.
GroupLayout layout_group(const InstanceGroup& group, const StyleChoice& style,
                         const StructuralConfig& st, const TextMeasurer& measurer,
                         int font_shrink = 0, int min_font_size = 1);

// layout_group wrapped with the instance handle, the spec's measurement op.
MeasuredGroup measure_group(const InstanceGroup& group, const StyleChoice& style,
                            const StructuralConfig& st, const TextMeasurer& measurer,
                            int font_shrink = 0, int min_font_size = 1);

// Fills a rows x cols grid: pinned groups take their pinned cells (throws
// LayoutOverflow when two pin the same cell), the rest fill free cells in
// row-major order. Groups that do not fit are appended to `overflow`.
VirtualGrid assign_cells(const std::vector<const MeasuredGroup*>& groups, int rows, int cols,
                         int section_id,
                         std::vector<const MeasuredGroup*>& overflow);

// Sizes rows/columns to content maxima (empty rows and columns collapse to
// zero) and checks the grid against the section extent, shrinking the
// inter-group gaps proportionally when only the gaps overflow. Returns false
// when the content alone cannot fit.
bool size_grid(VirtualGrid& grid, const std::map<std::string, const MeasuredGroup*>& measured,
               const Rect& section, const StructuralConfig& st);

// Produces non-overlapping, in-canvas rectangles for every group of the
// instance. Grid mode follows the virtual-grid algorithm with the overflow
// policy: shrink fonts step by step (not below the configured minimum),
// respill the last-assigned group of an overfull section into the next
// section with free cells, then give up. RandomBaseline places each group
// uniformly at random, rejecting overlaps (1000 attempts per group).
LayoutPlan plan_layout(const DocumentInstance& instance, const StyleChoice& style,
                       const StructuralConfig& st, LayoutMode mode, const TextMeasurer& measurer,
                       RandomSource& rng, int min_font_size);

} // namespace docsynth

#endif
