#ifndef DOCSYNTH_PIPELINE_HPP
#define DOCSYNTH_PIPELINE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "docsynth/annotate.hpp"
#include "docsynth/font.hpp"
#include "docsynth/layout.hpp"
#include "docsynth/schema.hpp"
#include "docsynth/values.hpp"

namespace docsynth {

// Schema validation failed before generation started.
class ValidationFailure : public std::runtime_error {
public:
    ValidationFailure(std::string message, ValidationReport report)
        : std::runtime_error(std::move(message)), report(std::move(report)) {}
    ValidationReport report;
};

// Batch aborted (failed-document ratio above the threshold).
class GenerationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenerationJob {
    std::uint64_t master_seed = 0;
    int count = 1;
    std::string out_dir = "out";
    LayoutMode layout_mode = LayoutMode::Grid;
    int instances_per_permutation = 1; // k>1 reuses one permutation for k docs
    bool export_iob = false;
    bool export_kie = false;
    bool export_layout_debug = false;
    bool debug_overlay = false;
    int workers = 1;
    std::optional<std::string> locale_override;
    std::optional<std::string> translate_override; // target language; enables translation
    TranslationMode translation_mode = TranslationMode::Lenient;
    double failure_threshold = 0.05;
    int max_retries = 3;
};

struct DocumentRecord {
    int index = 0;
    std::uint64_t permutation_stream = 0;
    int instance_index = 0;
    std::string status; // ok | regenerated | failed
    int retry_count = 0;
    std::string fingerprint;
    std::string values_digest;
    std::string image_file; // file names relative to the output directory
    std::string annotation_file;
    std::string iob_file;
    std::string kie_file;
    std::string layout_file;
    std::string error;
    GenerationTrace trace;
};

struct BatchManifest {
    std::string schema_digest;
    std::string doc_type;
    std::uint64_t master_seed = 0;
    std::string layout_mode;
    std::string locale;
    bool translation_enabled = false;
    std::string translation_target;
    std::vector<std::string> expected_keys;
    std::vector<DocumentRecord> records;
    int ok_count = 0;
    int regenerated_count = 0;
    int failed_count = 0;
    double uniqueness_ratio = 0.0; // distinct fingerprints / successful docs

    std::string to_json() const;
};

// Immutable per-run context: schema, fonts, value generators, translation
// fixtures. Safe to share across generation workers.
class GenerationEngine {
public:
    // `schema_dir` anchors a relative font_dir in the schema; `data_dir`
    // holds locales/, translations/ and the default fonts/.
    GenerationEngine(StochasticSchema schema, std::string schema_dir, std::string data_dir);

    const StochasticSchema& schema() const { return schema_; }
    const FontLibrary& fonts() const { return fonts_; }
    const ValueGeneratorRegistry& registry() const { return registry_; }
    const DictionaryTranslationProvider& translator() const { return *translator_; }

    // Validation with full registry context (entity types, generator keys,
    // locales, duplicate pins).
    ValidationReport validate() const;

    // Runs the per-document stage sequence: freeze -> values -> layout ->
    // render -> annotate -> write. Layout overflow retries with a fresh
    // derived stream up to job.max_retries times. Never throws for
    // per-document failures; the record carries status/error.
    DocumentRecord generate_one(const GenerationJob& job, int index) const;

    // Full batch with job.workers threads; writes <out>/manifest.json.
    // Throws ValidationFailure before any output, GenerationFailure when the
    // failed ratio exceeds job.failure_threshold (manifest is still
    // written).
    BatchManifest generate_batch(const GenerationJob& job) const;

private:
    CommonConfig effective_common(const GenerationJob& job) const;

    StochasticSchema schema_;
    std::string schema_digest_;
    std::string data_dir_;
    FontLibrary fonts_;
    ValueGeneratorRegistry registry_;
    std::unique_ptr<DictionaryTranslationProvider> translator_;
};

// Default asset directory: $DOCSYNTH_DATA_DIR or the build-time bundled
// path.
std::string default_data_dir();

} // namespace docsynth

#endif
