#include "docsynth/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "docsynth/unicode.hpp"

namespace docsynth {

std::string DiversityReport::to_string() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "MPCS %.4f ± %.4f  (N=%zu, d=%zu, provider=%s)", mean, stddev,
                  n, dim, provider.c_str());
    return buf;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim())
        throw std::invalid_argument("cosine_similarity: dimension mismatch (" +
                                    std::to_string(u.dim()) + " vs " + std::to_string(v.dim()) +
                                    ")");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("cosine_similarity: zero-norm vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

DiversityReport mpcs(const std::vector<EmbeddingVector>& vectors, const std::string& provider_id) {
    if (vectors.size() < 2)
        throw std::invalid_argument("mpcs requires at least 2 vectors, got " +
                                    std::to_string(vectors.size()));
    double sum = 0.0, sum_sq = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            double s = cosine_similarity(vectors[i], vectors[j]);
            sum += s;
            sum_sq += s * s;
            ++pairs;
        }
    }
    DiversityReport report;
    report.mean = sum / pairs;
    double variance = std::max(0.0, sum_sq / pairs - report.mean * report.mean);
    report.stddev = std::sqrt(variance);
    report.n = vectors.size();
    report.dim = vectors.front().dim();
    report.provider = provider_id;
    return report;
}

BuiltinFeatureEmbedding::BuiltinFeatureEmbedding(std::vector<std::string> expected_keys)
    : expected_keys_(std::move(expected_keys)) {}

EmbeddingVector BuiltinFeatureEmbedding::embed(const std::vector<Annotation>& annotations,
                                               int canvas_w, int canvas_h) const {
    std::size_t token_count = 0;
    for (const auto& ann : annotations) token_count += ann.children.size();
    if (token_count == 0)
        throw std::invalid_argument("cannot embed a document with no tokens");

    int w = canvas_w, h = canvas_h;
    if (w <= 0 || h <= 0) {
        w = h = 0;
        for (const auto& ann : annotations) {
            w = std::max(w, ann.box.right());
            h = std::max(h, ann.box.bottom());
        }
        w = std::max(w, 1);
        h = std::max(h, 1);
    }

    EmbeddingVector out;
    out.values.assign(kGridBins * kGridBins + expected_keys_.size() + 1 + 3, 0.0);

    // 8x8 histogram of token centers
    for (const auto& ann : annotations) {
        for (const auto& token : ann.children) {
            double cx = token.box.x + token.box.w / 2.0;
            double cy = token.box.y + token.box.h / 2.0;
            int bx = std::clamp(static_cast<int>(cx * kGridBins / w), 0, kGridBins - 1);
            int by = std::clamp(static_cast<int>(cy * kGridBins / h), 0, kGridBins - 1);
            out.values[std::size_t(by) * kGridBins + bx] += 1.0 / token_count;
        }
    }

    // class frequency over expected_keys + Other
    std::size_t class_base = kGridBins * kGridBins;
    for (const auto& ann : annotations) {
        std::size_t slot = expected_keys_.size(); // Other
        for (std::size_t k = 0; k < expected_keys_.size(); ++k) {
            if (expected_keys_[k] == ann.class_label) {
                slot = k;
                break;
            }
        }
        out.values[class_base + slot] += 1.0 / annotations.size();
    }

    // token shape statistics
    double total_len = 0.0, digits = 0.0, uppers = 0.0, letters = 0.0, chars = 0.0;
    for (const auto& ann : annotations) {
        for (const auto& token : ann.children) {
            auto cps = decode_utf8(token.text);
            total_len += cps.size();
            for (std::uint32_t cp : cps) {
                chars += 1.0;
                if (cp >= '0' && cp <= '9') digits += 1.0;
                bool upper = (cp >= 'A' && cp <= 'Z') || (cp >= 0xC0 && cp <= 0xDE);
                bool lower = (cp >= 'a' && cp <= 'z') || (cp >= 0xDF && cp <= 0xFF);
                if (upper) uppers += 1.0;
                if (upper || lower) letters += 1.0;
            }
        }
    }
    std::size_t stats_base = class_base + expected_keys_.size() + 1;
    out.values[stats_base] = std::min(1.0, total_len / token_count / 32.0);
    out.values[stats_base + 1] = chars > 0 ? digits / chars : 0.0;
    out.values[stats_base + 2] = letters > 0 ? uppers / letters : 0.0;
    return out;
}

namespace {

// Reads width/height straight out of a PNG IHDR chunk.
bool png_dimensions(const std::string& path, int& w, int& h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    unsigned char buf[24];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof buf)) return false;
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (!std::equal(sig, sig + 8, buf)) return false;
    if (std::string(reinterpret_cast<char*>(buf + 12), 4) != "IHDR") return false;
    auto be32 = [&](int off) {
        return int(buf[off]) << 24 | int(buf[off + 1]) << 16 | int(buf[off + 2]) << 8 |
               int(buf[off + 3]);
    };
    w = be32(16);
    h = be32(20);
    return w > 0 && h > 0;
}

} // namespace

EmbeddingVector embed_document(const std::string& annotation_path,
                               const EmbeddingProvider& provider) {
    std::ifstream in(annotation_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open annotation file '" + annotation_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::vector<Annotation> annotations;
    try {
        annotations = parse_annotation_json(buffer.str());
    } catch (const std::exception& e) {
        throw std::runtime_error("unparseable annotation file '" + annotation_path +
                                 "': " + e.what());
    }

    int w = 0, h = 0;
    std::string png_path = annotation_path;
    const std::string suffix = ".ann.json";
    if (png_path.size() > suffix.size() &&
        png_path.compare(png_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        png_path = png_path.substr(0, png_path.size() - suffix.size()) + ".png";
        png_dimensions(png_path, w, h);
    }
    return provider.embed(annotations, w, h);
}

std::vector<EmbeddingVector> load_vectors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vectors file '" + path + "'");
    std::vector<EmbeddingVector> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        EmbeddingVector v;
        double value;
        while (row >> value) v.values.push_back(value);
        if (!v.values.empty()) out.push_back(std::move(v));
    }
    return out;
}

} // namespace docsynth
