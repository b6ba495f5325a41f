#include "docsynth/schema.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace docsynth {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Color parse_color(const std::string& text) {
    std::string hex = text;
    if (!hex.empty() && hex[0] == '#') hex = hex.substr(1);
    if (hex.size() != 6)
        throw std::invalid_argument("color must be #RRGGBB, got '" + text + "'");
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit in color '" + text + "'");
    };
    auto byte = [&](int i) {
        return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1]));
    };
    return Color{byte(0), byte(2), byte(4)};
}

std::string color_to_hex(const Color& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

const char* to_string(Alignment a) {
    switch (a) {
        case Alignment::Left: return "left";
        case Alignment::Center: return "center";
        case Alignment::Right: return "right";
    }
    return "left";
}

Alignment alignment_from_string(const std::string& s) {
    if (s == "left") return Alignment::Left;
    if (s == "center") return Alignment::Center;
    if (s == "right") return Alignment::Right;
    throw std::invalid_argument("unknown alignment '" + s + "'");
}

const EntityDef* EntityGroupDef::find_entity(const std::string& entity_name) const {
    for (const auto& e : entities)
        if (e.name == entity_name) return &e;
    return nullptr;
}

const EntityGroupDef* StochasticSchema::find_group(const std::string& group_name) const {
    for (const auto& g : entity_groups)
        if (g.name == group_name) return &g;
    return nullptr;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    std::size_t n = 0;
    for (const auto& i : issues)
        if (i.severity == ValidationIssue::Severity::Error) ++n;
    return n;
}

std::size_t ValidationReport::warning_count() const {
    return issues.size() - error_count();
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& i : issues) {
        out << (i.severity == ValidationIssue::Severity::Error ? "error" : "warning");
        if (!i.context.empty()) out << " [" << i.context << "]";
        out << ": " << i.message << "\n";
    }
    out << error_count() << " error(s), " << warning_count() << " warning(s)\n";
    return out.str();
}

namespace {

// Tracks which keys were consumed so unknown keys can be warned about or
// rejected, per the strict flag.
struct KeyAudit {
    const json& obj;
    std::string path;
    std::set<std::string> seen;

    const json* get(std::initializer_list<const char*> names) {
        for (const char* name : names) {
            seen.insert(name);
            auto it = obj.find(name);
            if (it != obj.end()) return &*it;
        }
        return nullptr;
    }

    void finish(const ParseOptions& options, std::vector<std::string>& warnings) {
        if (!obj.is_object()) return;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (seen.count(it.key())) continue;
            std::string msg = "unknown key '" + it.key() + "' at " + path;
            if (options.strict) throw SchemaError(msg);
            warnings.push_back(msg);
        }
    }
};

double as_probability(const json& v, const std::string& path) {
    if (!v.is_number())
        throw SchemaError("expected a number at " + path);
    double p = v.get<double>();
    if (p < 0.0 || p > 1.0)
        throw SchemaError("probability out of [0,1] at " + path);
    return p;
}

bool as_flexible_bool(const json& v, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (s == "true") return true;
        if (s == "false") return false;
    }
    throw SchemaError("expected boolean (or \"True\"/\"False\") at " + path);
}

Color as_color(const json& v, const std::string& path) {
    if (v.is_string()) return parse_color(v.get<std::string>());
    if (v.is_array() && v.size() == 3)
        return Color{v[0].get<std::uint8_t>(), v[1].get<std::uint8_t>(), v[2].get<std::uint8_t>()};
    throw SchemaError("expected color \"#RRGGBB\" or [r,g,b] at " + path);
}

std::vector<std::string> as_string_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError("expected a list at " + path);
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw SchemaError("expected strings at " + path);
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<Alignment> as_alignment_list(const json& v, const std::string& path) {
    std::vector<Alignment> out;
    for (const auto& s : as_string_list(v, path)) {
        try {
            out.push_back(alignment_from_string(s));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string(e.what()) + " at " + path);
        }
    }
    if (out.empty()) throw SchemaError("alignment list empty at " + path);
    return out;
}

// "random" | positive integer
int as_row_count(const json& v, const std::string& path, bool allow_zero) {
    if (v.is_string()) {
        if (v.get<std::string>() == "random") return TabulateSpec::kRandom;
        throw SchemaError("expected integer or \"random\" at " + path);
    }
    if (v.is_number_integer()) {
        int n = v.get<int>();
        if (n < (allow_zero ? 0 : 1))
            throw SchemaError("row count out of range at " + path);
        return n;
    }
    throw SchemaError("expected integer or \"random\" at " + path);
}

TabulateSpec parse_tabulate(const json& obj, const std::string& path,
                            const ParseOptions& options, std::vector<std::string>& warnings) {
    TabulateSpec spec;
    KeyAudit audit{obj, path, {}};
    if (const json* v = audit.get({"create", "create_prob"}))
        spec.create_prob = as_probability(*v, path + ".create");
    if (const json* v = audit.get({"rows"}))
        spec.rows = as_row_count(*v, path + ".rows", false);
    if (const json* v = audit.get({"numEmptyRows", "num_empty_rows"}))
        spec.num_empty_rows = as_row_count(*v, path + ".numEmptyRows", true);
    if (const json* v = audit.get({"tabType", "tab_types"})) {
        spec.tab_types = as_string_list(*v, path + ".tabType");
        if (spec.tab_types.empty())
            throw SchemaError("tabType must not be empty at " + path);
        for (const auto& t : spec.tab_types)
            if (t != "horizontal" && t != "vertical")
                throw SchemaError("tabType entries must be horizontal|vertical at " + path);
    }
    audit.finish(options, warnings);
    return spec;
}

FontSpec parse_font_spec(const json& obj, const std::string& path,
                         const ParseOptions& options, std::vector<std::string>& warnings) {
    FontSpec spec;
    KeyAudit audit{obj, path, {}};
    if (const json* v = audit.get({"face"})) spec.face = v->get<std::string>();
    if (const json* v = audit.get({"size"})) spec.size = v->get<int>();
    if (const json* v = audit.get({"color"})) spec.color = as_color(*v, path + ".color");
    audit.finish(options, warnings);
    return spec;
}

EntityDef parse_entity(const json& obj, const std::string& path,
                       const ParseOptions& options, std::vector<std::string>& warnings) {
    if (!obj.is_object()) throw SchemaError("entity must be an object at " + path);
    EntityDef entity;
    KeyAudit audit{obj, path, {}};
    const json* name = audit.get({"name"});
    if (!name) throw SchemaError("missing required field 'name' at " + path);
    entity.name = name->get<std::string>();
    const json* type = audit.get({"type", "entity_type"});
    if (!type) throw SchemaError("missing required field 'type' at " + path + " (" + entity.name + ")");
    entity.entity_type = type->get<std::string>();
    if (const json* v = audit.get({"probability"}))
        entity.presence_probability = as_probability(*v, path + ".probability");
    if (const json* v = audit.get({"header"}))
        entity.headers = as_string_list(*v, path + ".header");
    if (const json* v = audit.get({"align"}))
        entity.align = as_alignment_list(*v, path + ".align");
    if (const json* v = audit.get({"header_align", "headerAlign"}))
        entity.header_align = as_alignment_list(*v, path + ".header_align");
    if (const json* v = audit.get({"fontVariance", "font_variance"}))
        entity.font_variance = parse_font_spec(*v, path + ".fontVariance", options, warnings);
    if (const json* v = audit.get({"addHeader", "add_header"}))
        entity.add_header = as_flexible_bool(*v, path + ".addHeader");
    audit.finish(options, warnings);
    return entity;
}

EntityGroupDef parse_group(const json& obj, const std::string& path, bool saw_global_header_prob,
                           double global_header_prob, const ParseOptions& options,
                           std::vector<std::string>& warnings) {
    if (!obj.is_object()) throw SchemaError("entity group must be an object at " + path);
    EntityGroupDef group;
    KeyAudit audit{obj, path, {}};
    const json* name = audit.get({"name"});
    if (!name) throw SchemaError("missing required field 'name' at " + path);
    group.name = name->get<std::string>();
    std::string where = path + "(" + group.name + ")";

    if (const json* v = audit.get({"segment"})) {
        if (!v->is_object()) throw SchemaError("segment must map id->probability at " + where);
        for (auto it = v->begin(); it != v->end(); ++it) {
            int id;
            try {
                id = std::stoi(it.key());
            } catch (...) {
                throw SchemaError("segment key '" + it.key() + "' is not an integer at " + where);
            }
            group.segment_dist[id] = as_probability(it.value(), where + ".segment");
        }
    } else {
        group.segment_dist = {{0, 1.0}};
    }

    if (const json* v = audit.get({"tabulate"}))
        group.tabulate = parse_tabulate(*v, where + ".tabulate", options, warnings);
    else
        group.tabulate.create_prob = 0.0;

    if (const json* v = audit.get({"header"}))
        group.headers = as_string_list(*v, where + ".header");
    // Default per the common config's global entity-header probability.
    group.header_probability = saw_global_header_prob ? global_header_prob : 1.0;
    if (const json* v = audit.get({"headerProbability", "header_probability"}))
        group.header_probability = as_probability(*v, where + ".headerProbability");
    if (const json* v = audit.get({"probability"}))
        group.presence_probability = as_probability(*v, where + ".probability");
    if (const json* v = audit.get({"gridPosition", "grid_position"})) {
        if (v->is_array() && v->size() == 2)
            group.grid_position = {(*v)[0].get<int>(), (*v)[1].get<int>()};
        else if (v->is_object() && v->contains("row") && v->contains("col"))
            group.grid_position = {(*v)["row"].get<int>(), (*v)["col"].get<int>()};
        else
            throw SchemaError("gridPosition must be [row, col] at " + where);
    }
    if (const json* v = audit.get({"groupAlignment", "group_alignment"}))
        group.group_alignment = as_alignment_list(*v, where + ".groupAlignment");

    const json* entities = audit.get({"entities"});
    if (!entities || !entities->is_array())
        throw SchemaError("missing required field 'entities' at " + where);
    int index = 0;
    for (const auto& e : *entities)
        group.entities.push_back(
            parse_entity(e, where + ".entities[" + std::to_string(index++) + "]", options, warnings));

    if (const json* v = audit.get({"entityShuffleGroups", "entity_shuffle_groups"})) {
        if (!v->is_array()) throw SchemaError("entityShuffleGroups must be a list of lists at " + where);
        for (const auto& sub : *v)
            group.entity_shuffle_groups.push_back(as_string_list(sub, where + ".entityShuffleGroups"));
    }
    audit.finish(options, warnings);
    return group;
}

StructuralConfig parse_structural(const json& obj, const std::string& path,
                                  const ParseOptions& options, std::vector<std::string>& warnings) {
    StructuralConfig cfg;
    KeyAudit audit{obj, path, {}};
    if (const json* v = audit.get({"num_segments"})) cfg.num_segments = v->get<int>();
    if (const json* v = audit.get({"segment_size"})) {
        if (v->is_array() && v->size() == 2) {
            cfg.segment_rows = (*v)[0].get<int>();
            cfg.segment_cols = (*v)[1].get<int>();
        } else if (v->is_object()) {
            cfg.segment_rows = v->value("rows", cfg.segment_rows);
            cfg.segment_cols = v->value("cols", cfg.segment_cols);
        } else {
            throw SchemaError("segment_size must be [rows, cols] or {rows, cols} at " + path);
        }
    }
    if (const json* v = audit.get({"canvas_width"})) cfg.canvas_width = v->get<int>();
    if (const json* v = audit.get({"canvas_height"})) cfg.canvas_height = v->get<int>();
    if (const json* v = audit.get({"intra_group_y_offset"})) cfg.intra_group_y_offset = v->get<int>();
    if (const json* v = audit.get({"intra_group_x_offset"})) cfg.intra_group_x_offset = v->get<int>();
    if (const json* v = audit.get({"inter_group_y_offset"})) cfg.inter_group_y_offset = v->get<int>();
    if (const json* v = audit.get({"space_width_weight"})) cfg.space_width_weight = v->get<double>();
    if (const json* v = audit.get({"min_rows"})) cfg.min_rows = v->get<int>();
    if (const json* v = audit.get({"max_rows"})) cfg.max_rows = v->get<int>();
    if (const json* v = audit.get({"min_empty_rows"})) cfg.min_empty_rows = v->get<int>();
    if (const json* v = audit.get({"max_empty_rows"})) cfg.max_empty_rows = v->get<int>();
    audit.finish(options, warnings);
    return cfg;
}

TableStyleConfig parse_table_config(const json& obj, const std::string& path,
                                    const ParseOptions& options, std::vector<std::string>& warnings) {
    TableStyleConfig cfg;
    KeyAudit audit{obj, path, {}};
    if (const json* v = audit.get({"header_fonts"})) cfg.header_fonts = as_string_list(*v, path);
    if (const json* v = audit.get({"row_fonts"})) cfg.row_fonts = as_string_list(*v, path);
    if (const json* v = audit.get({"separators"})) cfg.separators = as_string_list(*v, path);
    if (const json* v = audit.get({"cell_padding"})) cfg.cell_padding = v->get<int>();
    audit.finish(options, warnings);
    return cfg;
}

// Common-config keys may sit at the top level of the schema document (the
// canonical layout) or inside a "common" object; both are accepted.
void parse_common(KeyAudit& audit, CommonConfig& common, const std::string& path,
                  const ParseOptions& options, std::vector<std::string>& warnings) {
    if (const json* v = audit.get({"faker_locale"})) common.faker_locale = v->get<std::string>();
    if (const json* v = audit.get({"translation"})) {
        KeyAudit t{*v, path + ".translation", {}};
        if (const json* e = t.get({"enable"}))
            common.translation.enable = as_flexible_bool(*e, path + ".translation.enable");
        if (const json* l = t.get({"target_lang_code"}))
            common.translation.target_lang_code = l->get<std::string>();
        t.finish(options, warnings);
    }
    if (const json* v = audit.get({"fake_value_generator_class", "generator_key"}))
        common.generator_key = v->get<std::string>();
    if (const json* v = audit.get({"structural_config"}))
        common.structural = parse_structural(*v, path + ".structural_config", options, warnings);
    if (const json* v = audit.get({"font_colors"})) {
        common.font_colors.clear();
        for (const auto& c : *v) common.font_colors.push_back(as_color(c, path + ".font_colors"));
    }
    if (const json* v = audit.get({"font_size"})) {
        if (v->is_array() && v->size() == 2) {
            common.font_size_min = (*v)[0].get<int>();
            common.font_size_max = (*v)[1].get<int>();
        } else if (v->is_object()) {
            common.font_size_min = v->value("min", common.font_size_min);
            common.font_size_max = v->value("max", common.font_size_max);
        } else {
            throw SchemaError("font_size must be [min, max] or {min, max} at " + path);
        }
    }
    if (const json* v = audit.get({"font_dir"})) common.font_dir = v->get<std::string>();
    if (const json* v = audit.get({"canvas_color_options"})) {
        common.canvas_color_options.clear();
        for (const auto& c : *v)
            common.canvas_color_options.push_back(as_color(c, path + ".canvas_color_options"));
    }
    if (const json* v = audit.get({"table_config"}))
        common.table_config = parse_table_config(*v, path + ".table_config", options, warnings);
    if (const json* v = audit.get({"show_entity_headers_probability"}))
        common.show_entity_headers_probability =
            as_probability(*v, path + ".show_entity_headers_probability");
    if (const json* v = audit.get({"consistent_patterns_for_values"})) {
        if (!v->is_array())
            throw SchemaError("consistent_patterns_for_values must be a list at " + path);
        common.consistent_patterns_for_values.clear();
        bool flat = !v->empty() && (*v)[0].is_string();
        if (flat) {
            // A flat token list is one pattern group.
            common.consistent_patterns_for_values.push_back(as_string_list(*v, path));
        } else {
            for (const auto& sub : *v)
                common.consistent_patterns_for_values.push_back(as_string_list(sub, path));
        }
    }
    if (const json* v = audit.get({"expected_keys"}))
        common.expected_keys = as_string_list(*v, path + ".expected_keys");
}

} // namespace

ParseResult parse_schema(const std::string& json_text, const ParseOptions& options) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("syntax error: ") + e.what(), static_cast<long>(e.byte));
    }
    if (!doc.is_object()) throw SchemaError("schema document must be a JSON object");

    ParseResult result;
    StochasticSchema& schema = result.schema;
    KeyAudit audit{doc, "$", {}};

    if (const json* v = audit.get({"doc_type_name", "doc_type"}))
        schema.doc_type_name = v->get<std::string>();

    bool saw_global_header_prob = doc.contains("show_entity_headers_probability") ||
                                  (doc.contains("common") &&
                                   doc["common"].contains("show_entity_headers_probability"));
    if (const json* v = audit.get({"common"})) {
        KeyAudit common_audit{*v, "$.common", {}};
        parse_common(common_audit, schema.common, "$.common", options, result.warnings);
        common_audit.finish(options, result.warnings);
    }
    parse_common(audit, schema.common, "$", options, result.warnings);

    const json* groups = audit.get({"entity_groups"});
    if (!groups || !groups->is_array())
        throw SchemaError("missing required field 'entity_groups'");
    int index = 0;
    for (const auto& g : *groups)
        schema.entity_groups.push_back(
            parse_group(g, "$.entity_groups[" + std::to_string(index++) + "]", saw_global_header_prob,
                        schema.common.show_entity_headers_probability, options, result.warnings));

    audit.finish(options, result.warnings);
    return result;
}

ParseResult parse_schema_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open schema file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_schema(buffer.str(), options);
}

namespace {

void check_probability(double p, const std::string& context, const std::string& field,
                       ValidationReport& report) {
    if (p < 0.0 || p > 1.0)
        report.issues.push_back({ValidationIssue::Severity::Error, context,
                                 field + " out of [0,1]"});
}

} // namespace

ValidationReport validate_schema(const StochasticSchema& schema, const ValidationContext& context) {
    ValidationReport report;
    auto error = [&](const std::string& where, const std::string& msg) {
        report.issues.push_back({ValidationIssue::Severity::Error, where, msg});
    };
    auto warning = [&](const std::string& where, const std::string& msg) {
        report.issues.push_back({ValidationIssue::Severity::Warning, where, msg});
    };

    if (schema.entity_groups.empty())
        error("", "schema must define at least one entity group");

    const CommonConfig& common = schema.common;
    const StructuralConfig& st = common.structural;
    if (st.num_segments < 1) error("structural_config", "num_segments must be >= 1");
    if (st.canvas_width <= 0 || st.canvas_height <= 0)
        error("structural_config", "canvas dimensions must be positive");
    if (st.segment_rows <= 0 || st.segment_cols <= 0)
        error("structural_config", "segment_size must be positive");
    if (st.min_rows < 1 || st.max_rows < st.min_rows)
        error("structural_config", "row bounds must satisfy 1 <= min_rows <= max_rows");
    if (st.min_empty_rows < 0 || st.max_empty_rows < st.min_empty_rows)
        error("structural_config", "empty-row bounds must satisfy 0 <= min <= max");
    if (common.font_size_min > common.font_size_max)
        error("common", "font_size.min must be <= font_size.max");
    if (common.font_size_min <= 0) error("common", "font sizes must be positive");
    if (common.expected_keys.empty())
        error("common", "expected_keys must not be empty");
    if (common.font_colors.empty()) error("common", "font_colors must not be empty");
    if (common.canvas_color_options.empty())
        error("common", "canvas_color_options must not be empty");
    if (common.table_config.header_fonts.empty() || common.table_config.row_fonts.empty() ||
        common.table_config.separators.empty())
        error("table_config", "each style option list must be non-empty");
    check_probability(common.show_entity_headers_probability, "common",
                      "show_entity_headers_probability", report);
    if (context.known_generator_keys &&
        !context.known_generator_keys->count(common.generator_key))
        error("common", "generator key '" + common.generator_key + "' is not registered");
    if (context.known_locales && !context.known_locales->count(common.faker_locale))
        error("common", "locale '" + common.faker_locale + "' has no generator bundle");

    std::set<std::string> group_names;
    for (const auto& group : schema.entity_groups) {
        const std::string where = group.name;
        if (!group_names.insert(group.name).second)
            error(where, "duplicate group name");

        double sum = 0.0;
        for (const auto& [id, p] : group.segment_dist) {
            sum += p;
            if (id < 0 || id >= st.num_segments)
                error(where, "segment id " + std::to_string(id) + " outside [0, num_segments)");
            check_probability(p, where, "segment probability", report);
        }
        if (std::abs(sum - 1.0) > kSegmentSumTolerance) {
            error(where, "segment probabilities sum to " + std::to_string(sum) +
                             ", outside tolerance " + std::to_string(kSegmentSumTolerance));
        } else if (std::abs(sum - 1.0) > 1e-9) {
            warning(where, "segment probabilities sum to " + std::to_string(sum) +
                               "; renormalizing");
            report.renormalized_groups.push_back(group.name);
        }

        check_probability(group.presence_probability, where, "probability", report);
        check_probability(group.header_probability, where, "headerProbability", report);
        check_probability(group.tabulate.create_prob, where, "tabulate.create", report);
        if (group.tabulate.rows != TabulateSpec::kRandom && group.tabulate.rows < 1)
            error(where, "tabulate.rows must be >= 1 or \"random\"");
        if (group.tabulate.tab_types.empty())
            error(where, "tabulate.tabType must not be empty");
        if (group.grid_position) {
            auto [row, col] = *group.grid_position;
            if (row < 0 || row >= st.segment_rows || col < 0 || col >= st.segment_cols)
                error(where, "gridPosition outside segment grid");
        }
        if (group.group_alignment.empty()) error(where, "groupAlignment must not be empty");

        std::set<std::string> entity_names;
        for (const auto& entity : group.entities) {
            const std::string entity_where = where + "/" + entity.name;
            if (!entity_names.insert(entity.name).second)
                error(entity_where, "duplicate entity name within group");
            check_probability(entity.presence_probability, entity_where, "probability", report);
            if (entity.align.empty()) error(entity_where, "align must not be empty");
            if (entity.header_align.empty()) error(entity_where, "header_align must not be empty");
            if (context.known_entity_types &&
                !context.known_entity_types->count(entity.entity_type))
                error(entity_where, "entity type '" + entity.entity_type +
                                        "' is not registered in the value-generator registry");
            if (entity.add_header.value_or(false) && entity.headers.empty())
                error(entity_where, "addHeader is set but the header list is empty");
        }

        std::set<std::string> shuffled;
        for (const auto& sub : group.entity_shuffle_groups) {
            for (const auto& name : sub) {
                if (!entity_names.count(name))
                    error(where, "entityShuffleGroups references unknown entity '" + name + "'");
                if (!shuffled.insert(name).second)
                    error(where, "entity '" + name + "' appears in more than one shuffle group");
            }
        }
    }
    return report;
}

std::map<int, double> normalize_segment_dist(const std::map<int, double>& dist) {
    if (dist.empty()) throw std::invalid_argument("empty segment distribution");
    double sum = 0.0;
    for (const auto& [id, p] : dist) sum += p;
    if (std::abs(sum - 1.0) > kSegmentSumTolerance)
        throw std::invalid_argument("segment probabilities sum to " + std::to_string(sum) +
                                    ", outside tolerance");
    std::map<int, double> out;
    for (const auto& [id, p] : dist) out[id] = p / sum;
    return out;
}

namespace {

ordered_json alignments_to_json(const std::vector<Alignment>& list) {
    ordered_json out = ordered_json::array();
    for (auto a : list) out.push_back(to_string(a));
    return out;
}

ordered_json colors_to_json(const std::vector<Color>& list) {
    ordered_json out = ordered_json::array();
    for (const auto& c : list) out.push_back(color_to_hex(c));
    return out;
}

ordered_json row_count_to_json(int n) {
    if (n == TabulateSpec::kRandom) return "random";
    return n;
}

} // namespace

std::string serialize_schema(const StochasticSchema& schema) {
    const CommonConfig& common = schema.common;
    ordered_json doc;
    doc["doc_type_name"] = schema.doc_type_name;
    doc["faker_locale"] = common.faker_locale;
    doc["translation"] = {{"enable", common.translation.enable},
                          {"target_lang_code", common.translation.target_lang_code}};
    doc["fake_value_generator_class"] = common.generator_key;
    const StructuralConfig& st = common.structural;
    doc["structural_config"] = {
        {"num_segments", st.num_segments},
        {"segment_size", {{"rows", st.segment_rows}, {"cols", st.segment_cols}}},
        {"canvas_width", st.canvas_width},
        {"canvas_height", st.canvas_height},
        {"intra_group_y_offset", st.intra_group_y_offset},
        {"intra_group_x_offset", st.intra_group_x_offset},
        {"inter_group_y_offset", st.inter_group_y_offset},
        {"space_width_weight", st.space_width_weight},
        {"min_rows", st.min_rows},
        {"max_rows", st.max_rows},
        {"min_empty_rows", st.min_empty_rows},
        {"max_empty_rows", st.max_empty_rows},
    };
    doc["font_colors"] = colors_to_json(common.font_colors);
    doc["font_size"] = {{"min", common.font_size_min}, {"max", common.font_size_max}};
    doc["font_dir"] = common.font_dir;
    doc["canvas_color_options"] = colors_to_json(common.canvas_color_options);
    doc["table_config"] = {{"header_fonts", common.table_config.header_fonts},
                           {"row_fonts", common.table_config.row_fonts},
                           {"separators", common.table_config.separators},
                           {"cell_padding", common.table_config.cell_padding}};
    doc["show_entity_headers_probability"] = common.show_entity_headers_probability;
    doc["consistent_patterns_for_values"] = common.consistent_patterns_for_values;
    doc["expected_keys"] = common.expected_keys;

    doc["entity_groups"] = ordered_json::array();
    for (const auto& group : schema.entity_groups) {
        ordered_json g;
        g["name"] = group.name;
        ordered_json segment = ordered_json::object();
        for (const auto& [id, p] : group.segment_dist) segment[std::to_string(id)] = p;
        g["segment"] = segment;
        g["tabulate"] = {{"create", group.tabulate.create_prob},
                         {"rows", row_count_to_json(group.tabulate.rows)},
                         {"numEmptyRows", row_count_to_json(group.tabulate.num_empty_rows)},
                         {"tabType", group.tabulate.tab_types}};
        g["header"] = group.headers;
        g["headerProbability"] = group.header_probability;
        g["probability"] = group.presence_probability;
        if (group.grid_position)
            g["gridPosition"] = {group.grid_position->first, group.grid_position->second};
        g["groupAlignment"] = alignments_to_json(group.group_alignment);
        g["entities"] = ordered_json::array();
        for (const auto& entity : group.entities) {
            ordered_json e;
            e["name"] = entity.name;
            e["type"] = entity.entity_type;
            e["probability"] = entity.presence_probability;
            e["header"] = entity.headers;
            e["align"] = alignments_to_json(entity.align);
            e["header_align"] = alignments_to_json(entity.header_align);
            if (entity.font_variance) {
                ordered_json fv = ordered_json::object();
                if (entity.font_variance->face) fv["face"] = *entity.font_variance->face;
                if (entity.font_variance->size) fv["size"] = *entity.font_variance->size;
                if (entity.font_variance->color)
                    fv["color"] = color_to_hex(*entity.font_variance->color);
                e["fontVariance"] = fv;
            }
            if (entity.add_header) e["addHeader"] = *entity.add_header;
            g["entities"].push_back(e);
        }
        g["entityShuffleGroups"] = group.entity_shuffle_groups;
        doc["entity_groups"].push_back(g);
    }
    return doc.dump(2);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string schema_digest(const StochasticSchema& schema) {
    return fnv1a_hex(serialize_schema(schema));
}

} // namespace docsynth
