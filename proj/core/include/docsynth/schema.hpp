#ifndef DOCSYNTH_SCHEMA_HPP
#define DOCSYNTH_SCHEMA_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "docsynth/geometry.hpp"

namespace docsynth {

// Thrown by parse_schema on malformed input. `position` is the byte offset
// into the document for JSON syntax errors, -1 for semantic ones.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& message, long position = -1)
        : std::runtime_error(message), position_(position) {}
    long position() const { return position_; }

private:
    long position_;
};

// Partial font override: unset fields inherit the document-level choice.
struct FontSpec {
    std::optional<std::string> face;
    std::optional<int> size;
    std::optional<Color> color;
};

struct TabulateSpec {
    static constexpr int kRandom = -1; // sentinel for "random" row bounds

    double create_prob = 0.0;
    int rows = 1;            // kRandom when the schema says "random"
    int num_empty_rows = 0;  // kRandom when the schema says "random"
    std::vector<std::string> tab_types{"horizontal", "vertical"};
};

struct EntityDef {
    std::string name; // annotation class label
    std::string entity_type;
    double presence_probability = 1.0;
    std::vector<std::string> headers;
    std::vector<Alignment> align{Alignment::Left};
    std::vector<Alignment> header_align{Alignment::Left};
    std::optional<FontSpec> font_variance;
    std::optional<bool> add_header; // true forces a header regardless of global choice
};

struct EntityGroupDef {
    std::string name;
    std::map<int, double> segment_dist; // segment id -> probability
    TabulateSpec tabulate;
    std::vector<std::string> headers;
    double header_probability = 1.0;
    double presence_probability = 1.0;
    std::optional<std::pair<int, int>> grid_position; // (row, col), pins the cell
    std::vector<Alignment> group_alignment{Alignment::Left};
    std::vector<EntityDef> entities;
    std::vector<std::vector<std::string>> entity_shuffle_groups;

    const EntityDef* find_entity(const std::string& entity_name) const;
};

struct TranslationConfig {
    bool enable = false;
    std::string target_lang_code;
};

struct StructuralConfig {
    int num_segments = 1;
    int segment_rows = 1;
    int segment_cols = 1;
    int canvas_width = 1240;
    int canvas_height = 1754;
    int intra_group_y_offset = 6;
    int intra_group_x_offset = 12;
    int inter_group_y_offset = 16;
    double space_width_weight = 1.0;
    int min_rows = 1; // bounds for tabulate rows/"random"
    int max_rows = 8;
    int min_empty_rows = 0;
    int max_empty_rows = 2;
};

struct TableStyleConfig {
    std::vector<std::string> header_fonts{"DejaVuSans-Bold"};
    std::vector<std::string> row_fonts{"DejaVuSans"};
    std::vector<std::string> separators{"none", "horizontal", "grid"};
    int cell_padding = 4;
};

struct CommonConfig {
    std::string faker_locale = "en";
    TranslationConfig translation;
    std::string generator_key = "builtin"; // from fake_value_generator_class
    StructuralConfig structural;
    std::vector<Color> font_colors{Color{0, 0, 0}};
    int font_size_min = 12;
    int font_size_max = 18;
    std::string font_dir;
    std::vector<Color> canvas_color_options{Color{255, 255, 255}};
    TableStyleConfig table_config;
    double show_entity_headers_probability = 1.0;
    // Each inner list is one pattern group; a single chosen token is reused
    // for every value of that group within a document. Group 0 holds the
    // currency symbols by convention.
    std::vector<std::vector<std::string>> consistent_patterns_for_values;
    std::vector<std::string> expected_keys;
};

struct StochasticSchema {
    std::string doc_type_name = "document";
    CommonConfig common;
    std::vector<EntityGroupDef> entity_groups;

    const EntityGroupDef* find_group(const std::string& group_name) const;
};

struct ValidationIssue {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string context; // "group/entity" path, empty for schema-level issues
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    // Groups whose segment distribution sums inside tolerance but not to 1
    // and will be renormalized at sampling time.
    std::vector<std::string> renormalized_groups;

    bool ok() const;
    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::string to_string() const;
};

// Names validate_schema may resolve against. Null members skip that check.
struct ValidationContext {
    const std::set<std::string>* known_entity_types = nullptr;
    const std::set<std::string>* known_generator_keys = nullptr;
    const std::set<std::string>* known_locales = nullptr;
};

struct ParseOptions {
    bool strict = false; // reject unknown keys instead of warning
};

struct ParseResult {
    StochasticSchema schema;
    std::vector<std::string> warnings; // unknown-key notices in non-strict mode
};

// Tolerance on the segment-probability sum before renormalization is refused.
inline constexpr double kSegmentSumTolerance = 0.05;

ParseResult parse_schema(const std::string& json_text, const ParseOptions& options = {});
ParseResult parse_schema_file(const std::string& path, const ParseOptions& options = {});

ValidationReport validate_schema(const StochasticSchema& schema,
                                 const ValidationContext& context = {});

// Divides every probability by the total. Requires the sum to lie within
// [1 - kSegmentSumTolerance, 1 + kSegmentSumTolerance]; the result sums to
// 1.0 within 1e-9.
std::map<int, double> normalize_segment_dist(const std::map<int, double>& dist);

// Canonical JSON form; parse(serialize(s)) == s and serialization is a fixed
// point under reparsing.
std::string serialize_schema(const StochasticSchema& schema);

// Hex digest of the canonical serialization.
std::string schema_digest(const StochasticSchema& schema);

// FNV-1a 64 over a byte string, as a 16-char lowercase hex digest. Shared by
// schema digests and permutation fingerprints.
std::string fnv1a_hex(const std::string& bytes);

} // namespace docsynth

#endif
