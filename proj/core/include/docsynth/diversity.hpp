#ifndef DOCSYNTH_DIVERSITY_HPP
#define DOCSYNTH_DIVERSITY_HPP

#include <string>
#include <vector>

#include "docsynth/annotate.hpp"

namespace docsynth {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

struct DiversityReport {
    double mean = 0.0;   // mean pairwise cosine similarity
    double stddev = 0.0; // population std over the same pair set
    std::size_t n = 0;   // documents
    std::size_t dim = 0;
    std::string provider;

    std::string to_string() const;
};

// u.v / (|u||v|). Throws std::invalid_argument on dimension mismatch or a
// zero-norm vector.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Mean over all n(n-1)/2 unordered pairs. Requires n >= 2.
DiversityReport mpcs(const std::vector<EmbeddingVector>& vectors,
                     const std::string& provider_id = "external");

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string id() const = 0;
    // canvas_w/h give the coordinate frame; pass 0 to normalize by the
    // annotations' own extent.
    virtual EmbeddingVector embed(const std::vector<Annotation>& annotations, int canvas_w,
                                  int canvas_h) const = 0;
};

// Annotation-derived features: an 8x8 spatial histogram of token centers,
// class frequencies over expected_keys + Other, and token shape statistics
// (mean length, digit ratio, uppercase ratio). Dimension 64 + K + 1 + 3.
class BuiltinFeatureEmbedding : public EmbeddingProvider {
public:
    explicit BuiltinFeatureEmbedding(std::vector<std::string> expected_keys);

    std::string id() const override { return "builtin-features"; }
    EmbeddingVector embed(const std::vector<Annotation>& annotations, int canvas_w,
                          int canvas_h) const override;

    static constexpr int kGridBins = 8;

private:
    std::vector<std::string> expected_keys_;
};

// Embeds one annotation file. Canvas dimensions come from the sibling .png
// (IHDR header) when present, else from the annotation extent. Throws on
// unparseable files and on documents with no tokens.
EmbeddingVector embed_document(const std::string& annotation_path,
                               const EmbeddingProvider& provider);

// Whitespace-separated numbers, one vector per line.
std::vector<EmbeddingVector> load_vectors_file(const std::string& path);

} // namespace docsynth

#endif
