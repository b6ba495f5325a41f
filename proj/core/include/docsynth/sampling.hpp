#ifndef DOCSYNTH_SAMPLING_HPP
#define DOCSYNTH_SAMPLING_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "docsynth/random.hpp"
#include "docsynth/schema.hpp"

namespace docsynth {

// Fully resolved font for one text role or entity.
struct ResolvedFont {
    std::string face;
    int size = 12;
    Color color{0, 0, 0};
};

// Document-level style draws: one canvas color plus font face/size/color per
// text role.
struct StyleChoice {
    Color canvas_color;
    ResolvedFont group_header_font;
    ResolvedFont entity_header_font;
    ResolvedFont value_font;
};

struct TableStyle {
    std::string header_font;
    std::string row_font;
    std::string separator; // none | horizontal | grid
    int cell_padding = 4;
};

// Concrete table shape; absent TableLayout means a stacked group.
struct TableLayout {
    std::string orientation; // horizontal | vertical
    int row_count = 1;       // value instances per entity
    int empty_row_count = 0;
    TableStyle style;
};

struct FrozenEntity {
    std::string name; // annotation class label
    std::string entity_type;
    std::optional<std::string> header;
    Alignment align = Alignment::Left;
    Alignment header_align = Alignment::Left;
    ResolvedFont font; // style choice merged with fontVariance
    std::optional<FontSpec> font_variance;
};

struct FrozenGroup {
    std::string name;
    int segment_id = 0;
    std::optional<std::string> header;
    std::optional<TableLayout> table;
    std::optional<std::pair<int, int>> grid_position;
    Alignment group_alignment = Alignment::Left;
    std::vector<FrozenEntity> entities; // post-shuffle order

    bool tabular() const { return table.has_value(); }
};

// The frozen outline of every stochastic attribute of one document;
// value-free and immutable once built.
struct DocumentPermutation {
    std::string doc_type_name;
    std::vector<FrozenGroup> groups;
    StyleChoice style;

    // Hex digest of the canonical serialization; equal permutations hash
    // equally across runs and platforms.
    std::string fingerprint() const;
    std::string canonical_text() const;
};

// True with probability p: uniform draw < p.
bool sample_presence(double p, RandomSource& rng);

// Inverse-CDF draw over the map's ascending key order. The distribution must
// be normalized and non-empty.
int sample_from_distribution(const std::map<int, double>& dist, RandomSource& rng);

template <typename T>
const T& sample_uniform_choice(const std::vector<T>& options, RandomSource& rng) {
    return rng.choice(options);
}

struct TableShape {
    std::string orientation;
    int row_count = 1;
    int empty_row_count = 0;
};

// Stacked (nullopt) with probability 1 - create_prob; otherwise a table with
// uniform orientation and row counts, "random" counts drawn from the bounds.
std::optional<TableShape> sample_table_layout(const TabulateSpec& spec,
                                              std::pair<int, int> row_bounds,
                                              std::pair<int, int> empty_row_bounds,
                                              RandomSource& rng);

// Permutes positions within each subgroup of names, leaving everything else
// fixed. Returns the new index order (result[i] = source index to place at
// position i). Subgroups must be disjoint; unknown names throw.
std::vector<std::size_t> shuffled_order(const std::vector<std::string>& names,
                                        const std::vector<std::vector<std::string>>& subgroups,
                                        RandomSource& rng);

StyleChoice sample_global_style(const CommonConfig& common,
                                const std::vector<std::string>& face_names, RandomSource& rng);

// Freezes every stochastic attribute of the schema, in a fixed draw order:
// document-global entity-header toggle; then per group (declaration order):
// presence, segment, table shape (+ per-table style), group header
// presence/choice, group alignment; then per entity: presence, header
// choice, header alignment, alignment; then subgroup shuffles; finally the
// global style. Groups whose entities all sample absent are dropped. A
// permutation with zero groups is retried up to 10 times, then throws.
DocumentPermutation freeze_permutation(const StochasticSchema& schema,
                                       const std::vector<std::string>& face_names,
                                       RandomSource& rng);

} // namespace docsynth

#endif
