#ifndef DOCSYNTH_ANNOTATE_HPP
#define DOCSYNTH_ANNOTATE_HPP

#include <map>
#include <string>
#include <vector>

#include "docsynth/render.hpp"

namespace docsynth {

// One exported entity record: bounding box + value, word-level children and
// the class label ("Other" for anything outside expected_keys, headers
// included).
struct Annotation {
    Rect box;
    std::string value;
    std::vector<RenderedToken> children;
    std::string class_label;

    bool operator==(const Annotation&) const = default;
};

struct IOBTokenRecord {
    std::string token;
    Rect box;
    std::string tag; // B-<class> | I-<class> | O
};

// Classes values by expected_keys membership; header-role entities are
// emitted with class "Other".
std::vector<Annotation> build_annotations(const std::vector<RenderedEntity>& rendered,
                                          const std::vector<std::string>& expected_keys);

// Indices of `annotations` in reading order: lines clustered by vertical
// overlap, left-to-right within a line.
std::vector<std::size_t> reading_order(const std::vector<Annotation>& annotations);

// JSON array of {entity: [[x,y],[w,h],value], children: [...], class}, keys
// in exactly that order.
std::string export_annotation_json(const std::vector<Annotation>& annotations);
std::vector<Annotation> parse_annotation_json(const std::string& content);

// Word-level IOB records in reading order.
std::vector<IOBTokenRecord> export_iob(const std::vector<Annotation>& annotations);
// token \t x \t y \t w \t h \t tag
std::string iob_to_tsv(const std::vector<IOBTokenRecord>& records);

// Key -> value map over exactly expected_keys; multiple values joined with
// "|" in reading order, absent keys map to "".
std::map<std::string, std::string> build_kie_targets(
    const std::vector<Annotation>& annotations, const std::vector<std::string>& expected_keys);
std::string export_kie_json(const std::vector<Annotation>& annotations,
                            const std::vector<std::string>& expected_keys);

} // namespace docsynth

#endif
