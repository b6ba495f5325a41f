#include "docsynth/sampling.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace docsynth {

bool sample_presence(double p, RandomSource& rng) {
    return rng.uniform() < p;
}

int sample_from_distribution(const std::map<int, double>& dist, RandomSource& rng) {
    if (dist.empty()) throw std::invalid_argument("empty distribution");
    double u = rng.uniform();
    double acc = 0.0;
    int last = dist.begin()->first;
    for (const auto& [key, p] : dist) {
        acc += p;
        last = key;
        if (u < acc) return key;
    }
    return last; // guards the acc≈1.0 rounding edge
}

std::optional<TableShape> sample_table_layout(const TabulateSpec& spec,
                                              std::pair<int, int> row_bounds,
                                              std::pair<int, int> empty_row_bounds,
                                              RandomSource& rng) {
    if (!sample_presence(spec.create_prob, rng)) return std::nullopt;
    TableShape shape;
    shape.orientation = sample_uniform_choice(spec.tab_types, rng);
    shape.row_count = spec.rows == TabulateSpec::kRandom
                          ? static_cast<int>(rng.uniform_int(row_bounds.first, row_bounds.second))
                          : spec.rows;
    shape.empty_row_count =
        spec.num_empty_rows == TabulateSpec::kRandom
            ? static_cast<int>(rng.uniform_int(empty_row_bounds.first, empty_row_bounds.second))
            : spec.num_empty_rows;
    return shape;
}

std::vector<std::size_t> shuffled_order(const std::vector<std::string>& names,
                                        const std::vector<std::vector<std::string>>& subgroups,
                                        RandomSource& rng) {
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) order[i] = i;

    std::set<std::string> claimed;
    for (const auto& subgroup : subgroups) {
        // Positions of subgroup members, in declaration order. Members not in
        // `names` (e.g. entities sampled absent) are skipped.
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (std::find(subgroup.begin(), subgroup.end(), names[i]) == subgroup.end()) continue;
            if (!claimed.insert(names[i]).second)
                throw std::invalid_argument("entity '" + names[i] +
                                            "' appears in overlapping shuffle groups");
            positions.push_back(i);
        }
        std::vector<std::size_t> permuted = positions;
        rng.shuffle(permuted);
        for (std::size_t k = 0; k < positions.size(); ++k) order[positions[k]] = permuted[k];
    }
    return order;
}

StyleChoice sample_global_style(const CommonConfig& common,
                                const std::vector<std::string>& face_names, RandomSource& rng) {
    if (face_names.empty()) throw std::invalid_argument("no font faces available");
    StyleChoice style;
    style.canvas_color = sample_uniform_choice(common.canvas_color_options, rng);
    int size = static_cast<int>(rng.uniform_int(common.font_size_min, common.font_size_max));
    auto pick_font = [&]() {
        ResolvedFont font;
        font.face = sample_uniform_choice(face_names, rng);
        font.size = size;
        font.color = sample_uniform_choice(common.font_colors, rng);
        return font;
    };
    style.group_header_font = pick_font();
    style.entity_header_font = pick_font();
    style.value_font = pick_font();
    return style;
}

namespace {

ResolvedFont resolve_font(const ResolvedFont& base, const std::optional<FontSpec>& variance) {
    if (!variance) return base;
    ResolvedFont font = base;
    if (variance->face) font.face = *variance->face;
    if (variance->size) font.size = *variance->size;
    if (variance->color) font.color = *variance->color;
    return font;
}

// One freeze attempt; empty result means zero groups survived presence
// sampling.
std::vector<FrozenGroup> freeze_groups(const StochasticSchema& schema, bool global_show_headers,
                                       RandomSource& rng) {
    const StructuralConfig& st = schema.common.structural;
    std::vector<FrozenGroup> groups;
    for (const auto& def : schema.entity_groups) {
        if (!sample_presence(def.presence_probability, rng)) continue;

        FrozenGroup group;
        group.name = def.name;
        group.segment_id = sample_from_distribution(normalize_segment_dist(def.segment_dist), rng);
        auto shape = sample_table_layout(def.tabulate, {st.min_rows, st.max_rows},
                                         {st.min_empty_rows, st.max_empty_rows}, rng);
        if (shape) {
            TableLayout table;
            table.orientation = shape->orientation;
            table.row_count = shape->row_count;
            table.empty_row_count = shape->empty_row_count;
            const TableStyleConfig& tc = schema.common.table_config;
            table.style.header_font = sample_uniform_choice(tc.header_fonts, rng);
            table.style.row_font = sample_uniform_choice(tc.row_fonts, rng);
            table.style.separator = sample_uniform_choice(tc.separators, rng);
            table.style.cell_padding = tc.cell_padding;
            group.table = table;
        }
        if (!def.headers.empty() && sample_presence(def.header_probability, rng))
            group.header = sample_uniform_choice(def.headers, rng);
        group.grid_position = def.grid_position;
        group.group_alignment = sample_uniform_choice(def.group_alignment, rng);

        for (const auto& edef : def.entities) {
            if (!sample_presence(edef.presence_probability, rng)) continue;
            FrozenEntity entity;
            entity.name = edef.name;
            entity.entity_type = edef.entity_type;
            // Tables always label their columns/rows; stacked entities follow
            // the document-global toggle unless addHeader forces one.
            bool show_header = edef.add_header.value_or(false) || global_show_headers ||
                               group.table.has_value();
            if (show_header && !edef.headers.empty()) {
                entity.header = sample_uniform_choice(edef.headers, rng);
                entity.header_align = sample_uniform_choice(edef.header_align, rng);
            }
            entity.align = sample_uniform_choice(edef.align, rng);
            entity.font_variance = edef.font_variance;
            group.entities.push_back(std::move(entity));
        }
        if (group.entities.empty()) continue; // nothing visible to place

        std::vector<std::string> names;
        for (const auto& e : group.entities) names.push_back(e.name);
        std::vector<std::size_t> order = shuffled_order(names, def.entity_shuffle_groups, rng);
        std::vector<FrozenEntity> reordered;
        reordered.reserve(group.entities.size());
        for (std::size_t idx : order) reordered.push_back(std::move(group.entities[idx]));
        group.entities = std::move(reordered);

        groups.push_back(std::move(group));
    }
    return groups;
}

} // namespace

DocumentPermutation freeze_permutation(const StochasticSchema& schema,
                                       const std::vector<std::string>& face_names,
                                       RandomSource& rng) {
    constexpr int kMaxAttempts = 10;
    bool global_show_headers = sample_presence(schema.common.show_entity_headers_probability, rng);

    std::vector<FrozenGroup> groups;
    int attempt = 0;
    for (; attempt < kMaxAttempts; ++attempt) {
        groups = freeze_groups(schema, global_show_headers, rng);
        if (!groups.empty()) break;
    }
    if (groups.empty())
        throw std::runtime_error("freeze_permutation: no entity group present after " +
                                 std::to_string(kMaxAttempts) + " attempts");

    DocumentPermutation permutation;
    permutation.doc_type_name = schema.doc_type_name;
    permutation.groups = std::move(groups);
    permutation.style = sample_global_style(schema.common, face_names, rng);
    for (auto& group : permutation.groups)
        for (auto& entity : group.entities)
            entity.font = resolve_font(permutation.style.value_font, entity.font_variance);
    return permutation;
}

std::string DocumentPermutation::canonical_text() const {
    std::ostringstream out;
    auto font_text = [](const ResolvedFont& f) {
        return f.face + ":" + std::to_string(f.size) + ":" + color_to_hex(f.color);
    };
    out << "doc=" << doc_type_name << "\n";
    out << "style=" << color_to_hex(style.canvas_color) << "|" << font_text(style.group_header_font)
        << "|" << font_text(style.entity_header_font) << "|" << font_text(style.value_font) << "\n";
    for (const auto& g : groups) {
        out << "group=" << g.name << ";seg=" << g.segment_id << ";align="
            << to_string(g.group_alignment) << ";header=" << g.header.value_or("<none>");
        if (g.grid_position)
            out << ";pin=" << g.grid_position->first << "," << g.grid_position->second;
        if (g.table)
            out << ";table=" << g.table->orientation << "," << g.table->row_count << ","
                << g.table->empty_row_count << "," << g.table->style.header_font << ","
                << g.table->style.row_font << "," << g.table->style.separator;
        out << "\n";
        for (const auto& e : g.entities) {
            out << "  entity=" << e.name << ";type=" << e.entity_type << ";header="
                << e.header.value_or("<none>") << ";align=" << to_string(e.align)
                << ";halign=" << to_string(e.header_align) << ";font=" << font_text(e.font) << "\n";
        }
    }
    return out.str();
}

std::string DocumentPermutation::fingerprint() const {
    return fnv1a_hex(canonical_text());
}

} // namespace docsynth
