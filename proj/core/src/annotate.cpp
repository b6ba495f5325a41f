#include "docsynth/annotate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace docsynth {

using ordered_json = nlohmann::ordered_json;

std::vector<Annotation> build_annotations(const std::vector<RenderedEntity>& rendered,
                                          const std::vector<std::string>& expected_keys) {
    std::set<std::string> keys(expected_keys.begin(), expected_keys.end());
    std::vector<Annotation> out;
    out.reserve(rendered.size());
    for (const auto& entity : rendered) {
        Annotation ann;
        ann.box = entity.box;
        ann.value = entity.value;
        ann.children = entity.tokens;
        bool is_value = entity.role == TextRole::Value;
        ann.class_label = is_value && keys.count(entity.label) ? entity.label : "Other";
        out.push_back(std::move(ann));
    }
    return out;
}

std::vector<std::size_t> reading_order(const std::vector<Annotation>& annotations) {
    std::vector<std::size_t> idx(annotations.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Rect& ra = annotations[a].box;
        const Rect& rb = annotations[b].box;
        if (ra.y != rb.y) return ra.y < rb.y;
        return ra.x < rb.x;
    });

    // Cluster into visual lines anchored at each line's first member.
    std::vector<std::vector<std::size_t>> lines;
    std::vector<std::pair<int, int>> bands; // y0, y1 per line
    for (std::size_t i : idx) {
        const Rect& r = annotations[i].box;
        bool joined = false;
        for (std::size_t l = 0; l < lines.size() && !joined; ++l) {
            int overlap = std::min(bands[l].second, r.bottom()) - std::max(bands[l].first, r.y);
            int min_h = std::min(bands[l].second - bands[l].first, r.h);
            if (overlap * 2 >= min_h && overlap > 0) {
                lines[l].push_back(i);
                joined = true;
            }
        }
        if (!joined) {
            lines.push_back({i});
            bands.emplace_back(r.y, r.bottom());
        }
    }
    std::sort(lines.begin(), lines.end(), [&](const auto& a, const auto& b) {
        return annotations[a.front()].box.y < annotations[b.front()].box.y;
    });
    std::vector<std::size_t> out;
    for (auto& line : lines) {
        std::sort(line.begin(), line.end(), [&](std::size_t a, std::size_t b) {
            if (annotations[a].box.x != annotations[b].box.x)
                return annotations[a].box.x < annotations[b].box.x;
            return annotations[a].box.y < annotations[b].box.y;
        });
        out.insert(out.end(), line.begin(), line.end());
    }
    return out;
}

namespace {

ordered_json boxed_value(const Rect& box, const std::string& text) {
    return ordered_json::array(
        {ordered_json::array({box.x, box.y}), ordered_json::array({box.w, box.h}), text});
}

} // namespace

std::string export_annotation_json(const std::vector<Annotation>& annotations) {
    ordered_json doc = ordered_json::array();
    for (const auto& ann : annotations) {
        ordered_json record;
        record["entity"] = boxed_value(ann.box, ann.value);
        ordered_json children = ordered_json::array();
        for (const auto& child : ann.children)
            children.push_back(boxed_value(child.box, child.text));
        record["children"] = children;
        record["class"] = ann.class_label;
        doc.push_back(std::move(record));
    }
    return doc.dump(4);
}

namespace {

std::pair<Rect, std::string> parse_boxed(const ordered_json& node) {
    Rect box{node.at(0).at(0).get<int>(), node.at(0).at(1).get<int>(), node.at(1).at(0).get<int>(),
             node.at(1).at(1).get<int>()};
    return {box, node.at(2).get<std::string>()};
}

} // namespace

std::vector<Annotation> parse_annotation_json(const std::string& content) {
    ordered_json doc = ordered_json::parse(content);
    std::vector<Annotation> out;
    for (const auto& record : doc) {
        Annotation ann;
        auto [box, value] = parse_boxed(record.at("entity"));
        ann.box = box;
        ann.value = value;
        for (const auto& child : record.at("children")) {
            auto [cbox, ctext] = parse_boxed(child);
            ann.children.push_back({ctext, cbox});
        }
        ann.class_label = record.at("class").get<std::string>();
        out.push_back(std::move(ann));
    }
    return out;
}

std::vector<IOBTokenRecord> export_iob(const std::vector<Annotation>& annotations) {
    std::vector<IOBTokenRecord> out;
    for (std::size_t i : reading_order(annotations)) {
        const Annotation& ann = annotations[i];
        bool other = ann.class_label == "Other";
        bool first = true;
        for (const auto& child : ann.children) {
            IOBTokenRecord record;
            record.token = child.text;
            record.box = child.box;
            if (other)
                record.tag = "O";
            else
                record.tag = (first ? "B-" : "I-") + ann.class_label;
            first = false;
            out.push_back(std::move(record));
        }
    }
    return out;
}

std::string iob_to_tsv(const std::vector<IOBTokenRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records)
        out << r.token << '\t' << r.box.x << '\t' << r.box.y << '\t' << r.box.w << '\t' << r.box.h
            << '\t' << r.tag << '\n';
    return out.str();
}

std::map<std::string, std::string> build_kie_targets(
    const std::vector<Annotation>& annotations, const std::vector<std::string>& expected_keys) {
    std::map<std::string, std::string> out;
    for (const auto& key : expected_keys) out[key] = "";
    for (std::size_t i : reading_order(annotations)) {
        const Annotation& ann = annotations[i];
        auto it = out.find(ann.class_label);
        if (it == out.end()) continue;
        if (!it->second.empty()) it->second += "|";
        it->second += ann.value;
    }
    return out;
}

std::string export_kie_json(const std::vector<Annotation>& annotations,
                            const std::vector<std::string>& expected_keys) {
    auto targets = build_kie_targets(annotations, expected_keys);
    ordered_json doc;
    for (const auto& key : expected_keys) doc[key] = targets.at(key);
    return doc.dump(4);
}

} // namespace docsynth
