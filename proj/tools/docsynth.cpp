#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "docsynth/diversity.hpp"
#include "docsynth/pipeline.hpp"

namespace fs = std::filesystem;
using namespace docsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitGeneration = 3;

int run_validate(const std::string& schema_path, bool strict, const std::string& data_dir) {
    ParseResult parsed;
    try {
        parsed = parse_schema_file(schema_path, {strict});
    } catch (const SchemaError& e) {
        std::cerr << "parse error: " << e.what();
        if (e.position() >= 0) std::cerr << " (byte " << e.position() << ")";
        std::cerr << "\n";
        return kExitValidation;
    }
    for (const auto& warning : parsed.warnings) std::cerr << "warning: " << warning << "\n";

    try {
        GenerationEngine engine(parsed.schema, fs::path(schema_path).parent_path().string(),
                                data_dir);
        ValidationReport report = engine.validate();
        std::cout << report.to_string();
        return report.ok() ? kExitOk : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int run_generate(const std::string& schema_path, const GenerationJob& job, bool strict,
                 const std::string& data_dir) {
    std::cout << "master seed: " << job.master_seed << "\n";
    ParseResult parsed;
    try {
        parsed = parse_schema_file(schema_path, {strict});
    } catch (const SchemaError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    }
    for (const auto& warning : parsed.warnings) std::cerr << "warning: " << warning << "\n";

    try {
        GenerationEngine engine(parsed.schema, fs::path(schema_path).parent_path().string(),
                                data_dir);
        BatchManifest manifest = engine.generate_batch(job);
        std::cout << "documents: " << manifest.records.size() << " (ok " << manifest.ok_count
                  << ", regenerated " << manifest.regenerated_count << ", failed "
                  << manifest.failed_count << ")\n";
        std::printf("uniqueness ratio: %.4f\n", manifest.uniqueness_ratio);
        std::cout << "layout mode: " << manifest.layout_mode << "\n";
        std::cout << "output: " << job.out_dir << " (manifest.json written)\n";
        return kExitOk;
    } catch (const ValidationFailure& e) {
        std::cerr << e.what();
        return kExitValidation;
    } catch (const GenerationFailure& e) {
        std::cerr << "generation aborted: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeneration;
    }
}

std::vector<std::string> expected_keys_for(const std::string& input_dir) {
    fs::path manifest_path = fs::path(input_dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, true);
        if (doc.contains("expected_keys"))
            return doc["expected_keys"].get<std::vector<std::string>>();
    }
    // No manifest: fall back to the classes observed in the files.
    std::set<std::string> classes;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (entry.path().string().ends_with(".ann.json")) {
            std::ifstream in(entry.path());
            std::ostringstream buf;
            buf << in.rdbuf();
            for (const auto& ann : parse_annotation_json(buf.str()))
                if (ann.class_label != "Other") classes.insert(ann.class_label);
        }
    }
    return {classes.begin(), classes.end()};
}

int run_diversity(const std::string& input_dir, const std::string& vectors_file,
                  const std::string& report_file) {
    try {
        std::vector<EmbeddingVector> vectors;
        std::string provider_id;
        if (!vectors_file.empty()) {
            vectors = load_vectors_file(vectors_file);
            provider_id = "external";
        } else {
            BuiltinFeatureEmbedding provider(expected_keys_for(input_dir));
            provider_id = provider.id();
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(input_dir))
                if (entry.path().string().ends_with(".ann.json")) files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto& file : files)
                vectors.push_back(embed_document(file.string(), provider));
        }
        if (vectors.size() < 2) {
            std::cerr << "error: need at least 2 documents/vectors, got " << vectors.size()
                      << "\n";
            return kExitValidation;
        }
        DiversityReport report = mpcs(vectors, provider_id);
        std::cout << report.to_string() << "\n";
        if (!report_file.empty()) {
            std::ofstream out(report_file);
            out << report.to_string() << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"docsynth: schema-driven synthetic document generator"};
    app.require_subcommand(1);

    std::string data_dir = default_data_dir();
    app.add_option("--data-dir", data_dir, "Asset directory (locales, translations, fonts)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a schema file");
    std::string schema_path;
    bool strict = false;
    validate_cmd->add_option("schema", schema_path, "Schema JSON file")->required();
    validate_cmd->add_flag("--strict", strict, "Reject unknown schema keys");

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Generate an annotated document batch");
    GenerationJob job;
    std::string layout_mode = "grid";
    std::vector<std::string> exports;
    std::string locale_override, translate_override;
    bool fail_fast_translation = false;
    generate_cmd->add_option("schema", schema_path, "Schema JSON file")->required();
    generate_cmd->add_option("--count", job.count, "Documents to generate")
        ->check(CLI::PositiveNumber);
    generate_cmd->add_option("--seed", job.master_seed, "Master seed");
    generate_cmd->add_option("--out", job.out_dir, "Output directory");
    generate_cmd->add_option("--locale", locale_override, "Override faker locale (e.g. es)");
    generate_cmd->add_option("--translate", translate_override,
                             "Enable header translation into this language code");
    generate_cmd->add_option("--layout", layout_mode, "Layout algorithm")
        ->check(CLI::IsMember({"grid", "random"}));
    generate_cmd
        ->add_option("--instances-per-permutation", job.instances_per_permutation,
                     "Documents sharing one frozen permutation")
        ->check(CLI::PositiveNumber);
    generate_cmd->add_option("--export", exports,
                             "Extra exports: iob, kie, layout (comma separated)")
        ->delimiter(',');
    generate_cmd->add_flag("--debug-overlay", job.debug_overlay,
                           "Draw red box outlines (diagnostic)");
    generate_cmd->add_option("--workers", job.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    generate_cmd->add_flag("--strict", strict, "Reject unknown schema keys");
    generate_cmd->add_flag("--fail-fast-translation", fail_fast_translation,
                           "Abort a document on missing translations instead of passing through");

    // diversity
    auto* diversity_cmd = app.add_subcommand("diversity", "Mean pairwise cosine similarity");
    std::string input_dir, vectors_file, report_file;
    auto* input_opt =
        diversity_cmd->add_option("--input", input_dir, "Directory of .ann.json files");
    auto* vectors_opt = diversity_cmd->add_option("--vectors", vectors_file,
                                                  "External embedding file (one vector per line)");
    diversity_cmd->add_option("--report", report_file, "Also write the report to this file");
    input_opt->excludes(vectors_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (validate_cmd->parsed()) return run_validate(schema_path, strict, data_dir);
    if (generate_cmd->parsed()) {
        job.layout_mode = layout_mode == "random" ? LayoutMode::RandomBaseline : LayoutMode::Grid;
        if (!locale_override.empty()) job.locale_override = locale_override;
        if (!translate_override.empty()) job.translate_override = translate_override;
        if (fail_fast_translation) job.translation_mode = TranslationMode::FailFast;
        for (const auto& e : exports) {
            if (e == "iob") job.export_iob = true;
            else if (e == "kie") job.export_kie = true;
            else if (e == "layout") job.export_layout_debug = true;
            else {
                std::cerr << "unknown export '" << e << "' (expected iob, kie, layout)\n";
                return kExitUsage;
            }
        }
        return run_generate(schema_path, job, strict, data_dir);
    }
    if (diversity_cmd->parsed()) {
        if (input_dir.empty() && vectors_file.empty()) {
            std::cerr << "diversity requires --input DIR or --vectors FILE\n";
            return kExitUsage;
        }
        return run_diversity(input_dir, vectors_file, report_file);
    }
    return kExitUsage;
}
