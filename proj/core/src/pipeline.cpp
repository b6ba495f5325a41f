#include "docsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"

#include "docsynth/canvas.hpp"
#include "docsynth/render.hpp"
#include "docsynth/sampling.hpp"

namespace docsynth {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string default_data_dir() {
    if (const char* env = std::getenv("DOCSYNTH_DATA_DIR"); env && *env) return env;
#ifdef DOCSYNTH_DEFAULT_DATA_DIR
    return DOCSYNTH_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

namespace {

std::string resolve_font_dir(const StochasticSchema& schema, const std::string& schema_dir,
                             const std::string& data_dir) {
    if (const char* env = std::getenv("DOCSYNTH_FONT_DIR"); env && *env) return env;
    const std::string& configured = schema.common.font_dir;
    if (!configured.empty()) {
        fs::path p(configured);
        if (p.is_absolute()) return configured;
        if (!schema_dir.empty() && fs::exists(fs::path(schema_dir) / p))
            return (fs::path(schema_dir) / p).string();
        if (fs::exists(p)) return configured;
    }
    return (fs::path(data_dir) / "fonts").string();
}

std::string zero_padded(int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*d", width, value);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

ordered_json rect_json(const Rect& r) {
    return ordered_json::array({r.x, r.y, r.w, r.h});
}

std::string layout_debug_json(const LayoutPlan& plan, const StructuralConfig& st) {
    ordered_json doc;
    doc["mode"] = to_string(plan.mode);
    doc["font_shrink_steps"] = plan.font_shrink_steps;
    doc["canvas"] = ordered_json::array({st.canvas_width, st.canvas_height});
    doc["sections"] = ordered_json::array();
    for (int s = 0; s < st.num_segments; ++s) {
        ordered_json section;
        section["id"] = s;
        section["band"] = rect_json(section_band(st, s));
        doc["sections"].push_back(section);
    }
    doc["grids"] = ordered_json::array();
    for (const auto& grid : plan.grids) {
        ordered_json g;
        g["section"] = grid.section_id;
        g["rows"] = grid.rows;
        g["cols"] = grid.cols;
        g["row_heights"] = grid.row_heights;
        g["col_widths"] = grid.col_widths;
        g["gap_x"] = grid.gap_x;
        g["gap_y"] = grid.gap_y;
        g["cells"] = ordered_json::array();
        for (const auto& [cell, name] : grid.cells) {
            ordered_json c;
            c["row"] = cell.first;
            c["col"] = cell.second;
            c["group"] = name;
            g["cells"].push_back(c);
        }
        doc["grids"].push_back(g);
    }
    doc["groups"] = ordered_json::array();
    for (const auto& placed : plan.placements) {
        ordered_json g;
        g["name"] = placed.group->source->name;
        g["rect"] = rect_json(placed.rect);
        g["sampled_segment"] = placed.sampled_segment;
        g["final_section"] = placed.final_section;
        g["pinned"] = placed.pinned;
        if (placed.cell)
            g["cell"] = ordered_json::array({placed.cell->first, placed.cell->second});
        doc["groups"].push_back(g);
    }
    return doc.dump(2);
}

} // namespace

GenerationEngine::GenerationEngine(StochasticSchema schema, std::string schema_dir,
                                   std::string data_dir)
    : schema_(std::move(schema)),
      schema_digest_(schema_digest(schema_)),
      data_dir_(std::move(data_dir)),
      fonts_(FontLibrary::load_dir(resolve_font_dir(schema_, schema_dir, data_dir_))),
      registry_(ValueGeneratorRegistry::builtin(data_dir_)),
      translator_(std::make_unique<DictionaryTranslationProvider>(
          (fs::path(data_dir_) / "translations").string())) {}

ValidationReport GenerationEngine::validate() const {
    std::set<std::string> generator_keys = registry_.bundle_keys();
    std::set<std::string> locales = registry_.locales();
    std::set<std::string> types;
    ValidationContext context;
    context.known_generator_keys = &generator_keys;
    context.known_locales = &locales;
    if (registry_.has_bundle(schema_.common.generator_key)) {
        types = registry_.entity_types(schema_.common.generator_key);
        context.known_entity_types = &types;
    }
    ValidationReport report = validate_schema(schema_, context);

    // Two groups pinned to the same cell can never both be placed.
    std::map<std::pair<int, int>, std::string> pins;
    for (const auto& group : schema_.entity_groups) {
        if (!group.grid_position) continue;
        auto [it, inserted] = pins.emplace(*group.grid_position, group.name);
        if (!inserted)
            report.issues.push_back({ValidationIssue::Severity::Error, group.name,
                                     "gridPosition collides with group '" + it->second + "'"});
    }
    for (const auto& face : schema_.common.table_config.header_fonts)
        if (!fonts_.has_face(face))
            report.issues.push_back({ValidationIssue::Severity::Error, "table_config",
                                     "header font face '" + face + "' not found in font dir"});
    for (const auto& face : schema_.common.table_config.row_fonts)
        if (!fonts_.has_face(face))
            report.issues.push_back({ValidationIssue::Severity::Error, "table_config",
                                     "row font face '" + face + "' not found in font dir"});
    return report;
}

CommonConfig GenerationEngine::effective_common(const GenerationJob& job) const {
    CommonConfig common = schema_.common;
    if (job.locale_override) common.faker_locale = *job.locale_override;
    if (job.translate_override) {
        common.translation.enable = true;
        common.translation.target_lang_code = *job.translate_override;
    }
    return common;
}

DocumentRecord GenerationEngine::generate_one(const GenerationJob& job, int index) const {
    DocumentRecord record;
    record.index = index;
    const int k = std::max(1, job.instances_per_permutation);
    const std::uint64_t perm_index = static_cast<std::uint64_t>(index) / k;
    const int instance_index = index % k;
    record.permutation_stream = perm_index;
    record.instance_index = instance_index;

    const CommonConfig common = effective_common(job);
    const StructuralConfig& st = common.structural;
    const std::vector<std::string> faces = fonts_.face_names();
    FontMeasurer measurer(fonts_, st.space_width_weight);

    std::string stem = schema_.doc_type_name + "_" + zero_padded(index, 6);
    fs::path out_dir(job.out_dir);

    for (int retry = 0; retry <= job.max_retries; ++retry) {
        record.retry_count = retry;
        record.trace = GenerationTrace{};
        try {
            RandomSource doc_root(job.master_seed, perm_index);
            // Instance mode keeps the permutation fixed across retries so
            // sibling documents share one fingerprint.
            std::uint64_t freeze_tag = (k > 1) ? 0 : static_cast<std::uint64_t>(retry);
            RandomSource freeze_rng = doc_root.derived(0xF000 + freeze_tag);
            RandomSource value_rng =
                doc_root.derived(0xA000 + std::uint64_t(instance_index) * 8 + retry);
            RandomSource layout_rng =
                doc_root.derived(0xB000 + std::uint64_t(instance_index) * 8 + retry);

            DocumentPermutation permutation = freeze_permutation(schema_, faces, freeze_rng);
            record.fingerprint = permutation.fingerprint();

            const TranslationProvider* provider =
                common.translation.enable ? translator_.get() : nullptr;
            DocumentInstance instance =
                instantiate_values(permutation, common, registry_, provider,
                                   job.translation_mode, value_rng, &record.trace);
            record.values_digest = value_digest(instance);

            LayoutPlan plan = plan_layout(instance, permutation.style, st, job.layout_mode,
                                          measurer, layout_rng, common.font_size_min);
            RenderResult rendered =
                render_document(instance, plan, fonts_, st, job.debug_overlay);
            std::vector<Annotation> annotations =
                build_annotations(rendered.entities, common.expected_keys);

            record.image_file = stem + ".png";
            rendered.canvas.write_png((out_dir / record.image_file).string());
            record.annotation_file = stem + ".ann.json";
            write_file(out_dir / record.annotation_file, export_annotation_json(annotations));
            if (job.export_iob) {
                record.iob_file = stem + ".iob.tsv";
                write_file(out_dir / record.iob_file, iob_to_tsv(export_iob(annotations)));
            }
            if (job.export_kie) {
                record.kie_file = stem + ".kie.json";
                write_file(out_dir / record.kie_file,
                           export_kie_json(annotations, common.expected_keys));
            }
            if (job.export_layout_debug) {
                record.layout_file = stem + ".layout.json";
                write_file(out_dir / record.layout_file, layout_debug_json(plan, st));
            }
            record.status = retry == 0 ? "ok" : "regenerated";
            record.error.clear();
            return record;
        } catch (const LayoutOverflow& e) {
            record.error = e.what(); // retry with a fresh derived stream
        } catch (const std::exception& e) {
            record.status = "failed";
            record.error = e.what();
            return record;
        }
    }
    record.status = "failed";
    return record;
}

BatchManifest GenerationEngine::generate_batch(const GenerationJob& job) const {
    ValidationReport report = validate();
    if (!report.ok())
        throw ValidationFailure("schema validation failed:\n" + report.to_string(), report);

    fs::create_directories(job.out_dir);

    std::vector<DocumentRecord> records(job.count);
    std::atomic<int> next{0};
    int worker_count = std::max(1, job.workers);
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= job.count) return;
            records[i] = generate_one(job, i);
        }
    };
    if (worker_count == 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < worker_count; ++w) workers.emplace_back(work);
        for (auto& t : workers) t.join();
    }

    const CommonConfig common = effective_common(job);
    BatchManifest manifest;
    manifest.schema_digest = schema_digest_;
    manifest.doc_type = schema_.doc_type_name;
    manifest.master_seed = job.master_seed;
    manifest.layout_mode = to_string(job.layout_mode);
    manifest.locale = common.faker_locale;
    manifest.translation_enabled = common.translation.enable;
    manifest.translation_target = common.translation.target_lang_code;
    manifest.expected_keys = common.expected_keys;
    manifest.records = std::move(records);

    std::set<std::string> fingerprints;
    for (const auto& r : manifest.records) {
        if (r.status == "ok") ++manifest.ok_count;
        else if (r.status == "regenerated") ++manifest.regenerated_count;
        else ++manifest.failed_count;
        if (r.status != "failed") fingerprints.insert(r.fingerprint);
    }
    int successful = manifest.ok_count + manifest.regenerated_count;
    manifest.uniqueness_ratio =
        successful > 0 ? static_cast<double>(fingerprints.size()) / successful : 0.0;

    write_file(fs::path(job.out_dir) / "manifest.json", manifest.to_json());

    double failure_ratio = static_cast<double>(manifest.failed_count) / job.count;
    if (failure_ratio > job.failure_threshold) {
        std::string causes;
        int shown = 0;
        for (const auto& r : manifest.records) {
            if (r.status != "failed" || shown >= 5) continue;
            causes += "\n  doc " + std::to_string(r.index) + ": " + r.error;
            ++shown;
        }
        throw GenerationFailure(std::to_string(manifest.failed_count) + "/" +
                                std::to_string(job.count) +
                                " documents failed (threshold " +
                                std::to_string(job.failure_threshold) + ")" + causes);
    }
    return manifest;
}

std::string BatchManifest::to_json() const {
    ordered_json doc;
    doc["schema_digest"] = schema_digest;
    doc["doc_type"] = doc_type;
    doc["master_seed"] = master_seed;
    doc["layout_mode"] = layout_mode;
    doc["locale"] = locale;
    doc["translation"] = {{"enabled", translation_enabled}, {"target_lang_code", translation_target}};
    doc["expected_keys"] = expected_keys;
    doc["count"] = records.size();
    doc["ok"] = ok_count;
    doc["regenerated"] = regenerated_count;
    doc["failed"] = failed_count;
    doc["uniqueness_ratio"] = uniqueness_ratio;
    doc["records"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json rec;
        rec["index"] = r.index;
        rec["permutation_stream"] = r.permutation_stream;
        rec["instance_index"] = r.instance_index;
        rec["status"] = r.status;
        rec["retry_count"] = r.retry_count;
        rec["fingerprint"] = r.fingerprint;
        rec["values_digest"] = r.values_digest;
        ordered_json files = ordered_json::object();
        if (!r.image_file.empty()) files["image"] = r.image_file;
        if (!r.annotation_file.empty()) files["annotation"] = r.annotation_file;
        if (!r.iob_file.empty()) files["iob"] = r.iob_file;
        if (!r.kie_file.empty()) files["kie"] = r.kie_file;
        if (!r.layout_file.empty()) files["layout"] = r.layout_file;
        rec["files"] = files;
        ordered_json sources = ordered_json::object();
        for (const auto& [source, count] : r.trace.values_by_source) sources[source] = count;
        rec["value_sources"] = sources;
        rec["headers_translated"] = r.trace.headers_translated;
        rec["headers_passthrough"] = r.trace.headers_passthrough;
        if (!r.error.empty()) rec["error"] = r.error;
        doc["records"].push_back(rec);
    }
    return doc.dump(2);
}

} // namespace docsynth
