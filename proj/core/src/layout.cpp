#include "docsynth/layout.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace docsynth {

const char* to_string(LayoutMode mode) {
    return mode == LayoutMode::Grid ? "grid" : "random-baseline";
}

const char* to_string(TextRole role) {
    switch (role) {
        case TextRole::GroupHeader: return "group-header";
        case TextRole::EntityHeader: return "entity-header";
        case TextRole::Value: return "value";
    }
    return "value";
}

const std::string& MeasuredGroup::name() const { return group->source->name; }

const PlacedGroup* LayoutPlan::find(const std::string& group_name) const {
    for (const auto& p : placements)
        if (p.group->source->name == group_name) return &p;
    return nullptr;
}

Rect section_band(const StructuralConfig& st, int id) {
    long long h = st.canvas_height;
    int top = static_cast<int>(h * id / st.num_segments);
    int bottom = static_cast<int>(h * (id + 1) / st.num_segments);
    return Rect{0, top, st.canvas_width, bottom - top};
}

namespace {

ResolvedFont shrunk(ResolvedFont font, int steps, int min_size) {
    font.size = std::max(std::min(font.size, min_size), font.size - steps);
    if (font.size < 1) font.size = 1;
    return font;
}

// Table cell fonts: the table style dictates the face, the per-entity
// resolution keeps size/color (and an explicit fontVariance face wins).
ResolvedFont table_value_font(const FrozenEntity& entity, const TableStyle& style) {
    ResolvedFont font = entity.font;
    if (!entity.font_variance || !entity.font_variance->face) font.face = style.row_font;
    return font;
}

struct CellExtent {
    BlockExtent ext;
    std::string text;
};

void layout_table(const InstanceGroup& group, const StyleChoice& style,
                  const StructuralConfig& st, const TextMeasurer& measurer, int shrink,
                  int min_size, int start_y, GroupLayout& out) {
    const FrozenGroup& frozen = *group.source;
    const TableLayout& table = *frozen.table;
    const int pad = table.style.cell_padding;
    const std::size_t n_entities = group.entities.size();
    const int n_values = table.row_count;

    ResolvedFont header_font = shrunk(style.entity_header_font, shrink, min_size);
    header_font.face = table.style.header_font;

    // Measure every cell once.
    std::vector<CellExtent> headers(n_entities);
    std::vector<std::vector<CellExtent>> cells(n_entities);
    std::vector<ResolvedFont> value_fonts(n_entities);
    int empty_line_height = 0;
    for (std::size_t e = 0; e < n_entities; ++e) {
        const InstanceEntity& entity = group.entities[e];
        std::string header_text = entity.header.value_or(entity.source->name);
        headers[e] = {measurer.measure_block(header_text, header_font.face, header_font.size),
                      header_text};
        value_fonts[e] = shrunk(table_value_font(*entity.source, table.style), shrink, min_size);
        for (const auto& value : entity.values)
            cells[e].push_back(
                {measurer.measure_block(value, value_fonts[e].face, value_fonts[e].size), value});
        empty_line_height = std::max(
            empty_line_height,
            measurer.measure_block("", value_fonts[e].face, value_fonts[e].size).height);
    }

    const bool horizontal = table.orientation == "horizontal";
    // Logical table: data[r][c]; horizontal puts entities in columns,
    // vertical transposes (entities in rows, one column per value instance).
    std::size_t n_rows, n_cols;
    if (horizontal) {
        n_rows = 1 + n_values + table.empty_row_count;
        n_cols = n_entities;
    } else {
        n_rows = n_entities;
        n_cols = 1 + n_values + table.empty_row_count;
    }

    std::vector<int> col_w(n_cols, 0), row_h(n_rows, 0);
    auto account = [&](std::size_t r, std::size_t c, const BlockExtent& ext) {
        col_w[c] = std::max(col_w[c], ext.width);
        row_h[r] = std::max(row_h[r], ext.height);
    };
    for (std::size_t e = 0; e < n_entities; ++e) {
        if (horizontal) {
            account(0, e, headers[e].ext);
            for (int v = 0; v < n_values; ++v) account(1 + v, e, cells[e][v].ext);
        } else {
            account(e, 0, headers[e].ext);
            for (int v = 0; v < n_values; ++v) account(e, 1 + v, cells[e][v].ext);
        }
    }
    for (auto& h : row_h) h = std::max(h, empty_line_height);
    for (auto& w : col_w) w = std::max(w, empty_line_height); // floor for empty columns

    std::vector<int> col_x(n_cols + 1), row_y(n_rows + 1);
    for (std::size_t c = 0; c < n_cols; ++c) col_x[c + 1] = col_x[c] + col_w[c] + 2 * pad;
    for (std::size_t r = 0; r < n_rows; ++r) row_y[r + 1] = row_y[r] + row_h[r] + 2 * pad;
    const int table_w = col_x[n_cols];
    const int table_h = row_y[n_rows];

    auto place = [&](std::size_t r, std::size_t c, const CellExtent& cell, TextRole role,
                     const std::string& label, Alignment align, const ResolvedFont& font) {
        PlacedBlock block;
        block.role = role;
        block.label = label;
        block.text = cell.text;
        block.x = col_x[c] + pad + aligned_offset(align, col_w[c], cell.ext.width);
        block.y = start_y + row_y[r] + pad;
        block.width = cell.ext.width;
        block.height = cell.ext.height;
        block.line_align = align;
        block.font = font;
        out.blocks.push_back(std::move(block));
    };

    for (std::size_t e = 0; e < n_entities; ++e) {
        const InstanceEntity& entity = group.entities[e];
        Alignment header_align = entity.source->header_align;
        Alignment value_align = entity.source->align;
        if (horizontal) {
            place(0, e, headers[e], TextRole::EntityHeader, entity.source->name, header_align,
                  header_font);
            for (int v = 0; v < n_values; ++v)
                place(1 + v, e, cells[e][v], TextRole::Value, entity.source->name, value_align,
                      value_fonts[e]);
        } else {
            place(e, 0, headers[e], TextRole::EntityHeader, entity.source->name, header_align,
                  header_font);
            for (int v = 0; v < n_values; ++v)
                place(e, 1 + v, cells[e][v], TextRole::Value, entity.source->name, value_align,
                      value_fonts[e]);
        }
    }

    if (table.style.separator == "horizontal" || table.style.separator == "grid") {
        // Rules below the header band and below every subsequent row.
        for (std::size_t r = 1; r <= n_rows; ++r)
            out.separators.push_back({true, 0, start_y + row_y[r] - 1, table_w});
        if (table.style.separator == "grid") {
            out.separators.push_back({true, 0, start_y, table_w});
            for (std::size_t c = 0; c <= n_cols; ++c)
                out.separators.push_back(
                    {false, std::min(col_x[c], table_w - 1), start_y, table_h});
        }
    }

    out.width = std::max(out.width, table_w);
    out.height = start_y + table_h;
}

} // namespace

GroupLayout layout_group(const InstanceGroup& group, const StyleChoice& style,
                         const StructuralConfig& st, const TextMeasurer& measurer,
                         int font_shrink, int min_font_size) {
    GroupLayout out;
    const FrozenGroup& frozen = *group.source;
    int y = 0;

    if (group.header) {
        ResolvedFont font = shrunk(style.group_header_font, font_shrink, min_font_size);
        BlockExtent ext = measurer.measure_block(*group.header, font.face, font.size);
        PlacedBlock block{TextRole::GroupHeader, frozen.name, *group.header,
                          0,  0, ext.width, ext.height, Alignment::Left, font};
        out.blocks.push_back(std::move(block));
        out.width = std::max(out.width, ext.width);
        y = ext.height + st.intra_group_y_offset;
    }

    if (frozen.table) {
        layout_table(group, style, st, measurer, font_shrink, min_font_size, y, out);
        return out;
    }

    // Stacked: one row per entity, "header  value", value lines wrapping
    // below their own left edge.
    ResolvedFont header_font = shrunk(style.entity_header_font, font_shrink, min_font_size);
    for (const auto& entity : group.entities) {
        int x = 0;
        int row_h = 0;
        if (entity.header) {
            BlockExtent ext =
                measurer.measure_block(*entity.header, header_font.face, header_font.size);
            out.blocks.push_back({TextRole::EntityHeader, entity.source->name, *entity.header, 0,
                                  y, ext.width, ext.height, Alignment::Left, header_font});
            x = ext.width + st.intra_group_x_offset;
            row_h = ext.height;
        }
        ResolvedFont value_font = shrunk(entity.source->font, font_shrink, min_font_size);
        const std::string& value = entity.values.front();
        BlockExtent ext = measurer.measure_block(value, value_font.face, value_font.size);
        out.blocks.push_back({TextRole::Value, entity.source->name, value, x, y, ext.width,
                              ext.height, Alignment::Left, value_font});
        row_h = std::max(row_h, ext.height);
        out.width = std::max(out.width, x + ext.width);
        y += row_h + st.intra_group_y_offset;
    }
    out.height = y - st.intra_group_y_offset;
    return out;
}

MeasuredGroup measure_group(const InstanceGroup& group, const StyleChoice& style,
                            const StructuralConfig& st, const TextMeasurer& measurer,
                            int font_shrink, int min_font_size) {
    return {&group, layout_group(group, style, st, measurer, font_shrink, min_font_size)};
}

VirtualGrid assign_cells(const std::vector<const MeasuredGroup*>& groups, int rows, int cols,
                         int section_id, std::vector<const MeasuredGroup*>& overflow) {
    VirtualGrid grid;
    grid.section_id = section_id;
    grid.rows = rows;
    grid.cols = cols;

    for (const MeasuredGroup* g : groups) {
        const auto& pin = g->group->source->grid_position;
        if (!pin) continue;
        auto cell = *pin;
        if (cell.first < 0 || cell.first >= rows || cell.second < 0 || cell.second >= cols)
            throw LayoutOverflow("group '" + g->name() + "' pinned outside the grid");
        if (grid.cells.count(cell))
            throw LayoutOverflow("two groups pinned to cell (" + std::to_string(cell.first) +
                                 "," + std::to_string(cell.second) + ") in section " +
                                 std::to_string(section_id));
        grid.cells[cell] = g->name();
    }
    for (const MeasuredGroup* g : groups) {
        if (g->group->source->grid_position) continue;
        bool placed = false;
        for (int r = 0; r < rows && !placed; ++r) {
            for (int c = 0; c < cols && !placed; ++c) {
                if (grid.cells.count({r, c})) continue;
                grid.cells[{r, c}] = g->name();
                placed = true;
            }
        }
        if (!placed) overflow.push_back(g);
    }
    return grid;
}

bool size_grid(VirtualGrid& grid, const std::map<std::string, const MeasuredGroup*>& measured,
               const Rect& section, const StructuralConfig& st) {
    grid.row_heights.assign(grid.rows, 0);
    grid.col_widths.assign(grid.cols, 0);
    for (const auto& [cell, name] : grid.cells) {
        const MeasuredGroup* g = measured.at(name);
        grid.row_heights[cell.first] = std::max(grid.row_heights[cell.first], g->height());
        grid.col_widths[cell.second] = std::max(grid.col_widths[cell.second], g->width());
    }

    auto fit_axis = [](const std::vector<int>& sizes, int gap, int avail, int& out_gap) {
        int content = 0;
        int populated = 0;
        for (int s : sizes)
            if (s > 0) {
                content += s;
                ++populated;
            }
        if (content > avail) return false;
        out_gap = gap;
        if (populated > 1 && content + gap * (populated - 1) > avail)
            out_gap = (avail - content) / (populated - 1); // shrink empty space first
        return true;
    };
    int gap_y = 0, gap_x = 0;
    if (!fit_axis(grid.row_heights, st.inter_group_y_offset, section.h, gap_y)) return false;
    if (!fit_axis(grid.col_widths, st.inter_group_y_offset, section.w, gap_x)) return false;
    grid.gap_y = gap_y;
    grid.gap_x = gap_x;
    return true;
}

namespace {

int max_base_font_size(const DocumentInstance& instance) {
    const StyleChoice& style = instance.permutation->style;
    int size = std::max({style.group_header_font.size, style.entity_header_font.size,
                         style.value_font.size});
    for (const auto& g : instance.groups)
        for (const auto& e : g.entities) size = std::max(size, e.source->font.size);
    return size;
}

struct SectionPlacement {
    VirtualGrid grid;
    std::vector<const MeasuredGroup*> groups; // assigned in this section
};

// One grid-mode attempt at a fixed font-shrink step. Returns false when this
// step cannot fit.
bool place_grid(const std::vector<MeasuredGroup>& measured, const StructuralConfig& st,
                bool allow_respill, std::vector<SectionPlacement>& out) {
    std::vector<std::vector<const MeasuredGroup*>> by_section(st.num_segments);
    for (const auto& m : measured)
        by_section[m.group->source->segment_id].push_back(&m);

    std::map<std::string, const MeasuredGroup*> lookup;
    for (const auto& m : measured) lookup[m.name()] = &m;

    out.assign(st.num_segments, {});
    for (int s = 0; s < st.num_segments; ++s) {
        auto& pending = by_section[s];
        Rect band = section_band(st, s);
        for (;;) {
            std::vector<const MeasuredGroup*> overflow;
            VirtualGrid grid =
                assign_cells(pending, st.segment_rows, st.segment_cols, s, overflow);
            if (!overflow.empty()) {
                if (!allow_respill || s + 1 >= st.num_segments) return false;
                // Spill the cell-less groups into the next section.
                for (const MeasuredGroup* g : overflow)
                    by_section[s + 1].push_back(g);
                pending.erase(std::remove_if(pending.begin(), pending.end(),
                                             [&](const MeasuredGroup* g) {
                                                 return std::find(overflow.begin(), overflow.end(),
                                                                  g) != overflow.end();
                                             }),
                              pending.end());
                continue;
            }
            if (size_grid(grid, lookup, band, st)) {
                out[s].grid = std::move(grid);
                out[s].groups = pending;
                break;
            }
            // Section content overflows: respill the last unpinned group.
            if (!allow_respill) return false;
            auto it = std::find_if(pending.rbegin(), pending.rend(), [](const MeasuredGroup* g) {
                return !g->group->source->grid_position.has_value();
            });
            if (it == pending.rend() || pending.size() < 2 || s + 1 >= st.num_segments)
                return false;
            const MeasuredGroup* moved = *it;
            pending.erase(std::next(it).base());
            by_section[s + 1].push_back(moved);
        }
    }
    return true;
}

void emit_grid_placements(const std::vector<SectionPlacement>& sections,
                          const std::vector<MeasuredGroup>& measured, const StructuralConfig& st,
                          LayoutPlan& plan) {
    std::map<std::string, PlacedGroup> placed;
    for (const auto& sp : sections) {
        if (sp.groups.empty()) continue;
        const VirtualGrid& grid = sp.grid;
        Rect band = section_band(st, grid.section_id);

        int content_w = 0, populated_cols = 0;
        for (int w : grid.col_widths)
            if (w > 0) {
                content_w += w;
                ++populated_cols;
            }
        int total_w = content_w + grid.gap_x * std::max(0, populated_cols - 1);
        int x0 = band.x + std::max(0, (band.w - total_w) / 2);

        std::map<std::string, std::pair<int, int>> cell_of;
        for (const auto& [cell, name] : grid.cells) cell_of[name] = cell;

        std::vector<int> col_origin(grid.cols, 0), row_origin(grid.rows, 0);
        {
            int x = x0;
            for (int c = 0; c < grid.cols; ++c) {
                col_origin[c] = x;
                if (grid.col_widths[c] > 0) x += grid.col_widths[c] + grid.gap_x;
            }
            int y = band.y;
            for (int r = 0; r < grid.rows; ++r) {
                row_origin[r] = y;
                if (grid.row_heights[r] > 0) y += grid.row_heights[r] + grid.gap_y;
            }
        }

        for (const MeasuredGroup* g : sp.groups) {
            auto cell = cell_of.at(g->name());
            const FrozenGroup& frozen = *g->group->source;
            PlacedGroup p;
            p.group = g->group;
            p.content = g->content;
            p.sampled_segment = frozen.segment_id;
            p.final_section = grid.section_id;
            p.pinned = frozen.grid_position.has_value();
            p.cell = cell;
            int cx = col_origin[cell.second] +
                     aligned_offset(frozen.group_alignment, grid.col_widths[cell.second],
                                    g->width());
            p.rect = Rect{cx, row_origin[cell.first], g->width(), g->height()};
            placed[g->name()] = std::move(p);
        }
        plan.grids.push_back(grid);
    }
    // placements follow instance order
    for (const auto& m : measured) plan.placements.push_back(placed.at(m.name()));
}

bool place_random(const std::vector<MeasuredGroup>& measured, const StructuralConfig& st,
                  RandomSource& rng, LayoutPlan& plan) {
    constexpr int kAttempts = 1000;
    std::vector<Rect> taken;
    for (const auto& m : measured) {
        if (m.width() > st.canvas_width || m.height() > st.canvas_height) return false;
        bool placed = false;
        for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
            Rect candidate{static_cast<int>(rng.uniform_int(0, st.canvas_width - m.width())),
                           static_cast<int>(rng.uniform_int(0, st.canvas_height - m.height())),
                           m.width(), m.height()};
            bool clash = false;
            for (const auto& r : taken)
                if (r.intersects(candidate)) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            taken.push_back(candidate);
            PlacedGroup p;
            p.group = m.group;
            p.content = m.content;
            p.rect = candidate;
            p.sampled_segment = m.group->source->segment_id;
            p.final_section = -1;
            p.pinned = false;
            plan.placements.push_back(std::move(p));
            placed = true;
        }
        if (!placed) return false;
    }
    return true;
}

} // namespace

LayoutPlan plan_layout(const DocumentInstance& instance, const StyleChoice& style,
                       const StructuralConfig& st, LayoutMode mode, const TextMeasurer& measurer,
                       RandomSource& rng, int min_font_size) {
    int max_shrink = std::max(0, max_base_font_size(instance) - min_font_size);
    // Remedy order: the font-shrink ladder alone, then the ladder again with
    // respilling into later sections allowed.
    for (int respill = 0; respill <= (mode == LayoutMode::Grid ? 1 : 0); ++respill) {
        for (int shrink = 0; shrink <= max_shrink; ++shrink) {
            std::vector<MeasuredGroup> measured;
            measured.reserve(instance.groups.size());
            for (const auto& group : instance.groups)
                measured.push_back(
                    measure_group(group, style, st, measurer, shrink, min_font_size));

            LayoutPlan plan;
            plan.mode = mode;
            plan.font_shrink_steps = shrink;
            if (mode == LayoutMode::Grid) {
                std::vector<SectionPlacement> sections;
                if (place_grid(measured, st, respill == 1, sections)) {
                    emit_grid_placements(sections, measured, st, plan);
                    return plan;
                }
            } else {
                if (place_random(measured, st, rng, plan)) return plan;
            }
        }
    }
    throw LayoutOverflow("no placement found for document (content exceeds canvas)");
}

} // namespace docsynth
