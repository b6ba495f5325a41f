#ifndef DOCSYNTH_VALUES_HPP
#define DOCSYNTH_VALUES_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "docsynth/random.hpp"
#include "docsynth/sampling.hpp"

namespace docsynth {

struct ValueConstraints {
    std::optional<int> min_length;
    std::optional<int> max_length;
    std::optional<long long> min_value;
    std::optional<long long> max_value;
};

// Generation parameters passed to every value generator: locale, an opaque
// format hint individual generators may honor, and size/range constraints.
struct GeneratorParams {
    std::string locale = "en";
    std::string format;
    ValueConstraints constraints;
};

// Per-document state keeping consistent-pattern choices (e.g. one currency
// symbol reused by every amount in the document). Group indices refer to
// CommonConfig::consistent_patterns_for_values; group 0 holds the currency
// symbols by convention.
class ConsistentPatternState {
public:
    ConsistentPatternState() = default;
    explicit ConsistentPatternState(std::vector<std::vector<std::string>> groups)
        : groups_(std::move(groups)) {}

    // Chooses the group's token on first call (one uniform draw), then keeps
    // returning it. nullopt when the group does not exist or is empty.
    std::optional<std::string> token_for(std::size_t group_index, RandomSource& rng);

    const std::map<std::size_t, std::string>& chosen() const { return chosen_; }

private:
    std::vector<std::vector<std::string>> groups_;
    std::map<std::size_t, std::string> chosen_;
};

// Counters for auditing which bundle/locale produced values and how header
// translation resolved; aggregated into the batch manifest.
struct GenerationTrace {
    std::map<std::string, int> values_by_source; // "bundle/locale" -> count
    int headers_translated = 0;
    int headers_passthrough = 0;
    std::string translation_provider;
};

using GeneratorFn = std::function<std::string(const GeneratorParams&, ConsistentPatternState&,
                                              RandomSource&)>;

// Dispatch of entity types to generator functions, organized in named
// bundles (schema key `fake_value_generator_class` selects the bundle).
class ValueGeneratorRegistry {
public:
    // Built-in bundle backed by word lists under <data_dir>/locales/<tag>/.
    // The lists shipped with the project cover locales "en" and "es".
    static ValueGeneratorRegistry builtin(const std::string& data_dir);

    // Throws on duplicate (bundle, type) unless allow_override.
    void register_generator(const std::string& bundle, const std::string& entity_type,
                            GeneratorFn generator, bool allow_override = false);
    // Lets schemas reference an existing bundle under another name.
    void register_bundle_alias(const std::string& alias, const std::string& existing);

    bool has_bundle(const std::string& bundle) const;
    bool has_type(const std::string& bundle, const std::string& entity_type) const;
    std::set<std::string> entity_types(const std::string& bundle) const;
    std::set<std::string> bundle_keys() const;
    std::set<std::string> locales() const { return locales_; }

    // Dispatches to the bundle's generator. Throws for unknown bundles,
    // types, or locales unsupported by the built-in word lists.
    std::string generate(const std::string& bundle, const std::string& entity_type,
                         const GeneratorParams& params, ConsistentPatternState& state,
                         RandomSource& rng, GenerationTrace* trace = nullptr) const;

private:
    std::string resolve(const std::string& bundle) const;

    std::map<std::string, std::map<std::string, GeneratorFn>> bundles_;
    std::map<std::string, std::string> aliases_;
    std::set<std::string> locales_;
};

// ---- Header translation ------------------------------------------------

class TranslationProvider {
public:
    virtual ~TranslationProvider() = default;
    virtual std::string id() const = 0;
    // nullopt when the provider has no translation for (text, lang).
    virtual std::optional<std::string> translate(const std::string& text,
                                                 const std::string& lang) const = 0;
};

// Fixture dictionaries: <dir>/<lang>.tsv with "source<TAB>target" rows.
class DictionaryTranslationProvider : public TranslationProvider {
public:
    explicit DictionaryTranslationProvider(const std::string& dir);

    std::string id() const override { return "fixture-dictionary"; }
    std::optional<std::string> translate(const std::string& text,
                                         const std::string& lang) const override;
    std::set<std::string> languages() const;

private:
    std::map<std::string, std::map<std::string, std::string>> tables_; // lang -> source -> target
};

enum class TranslationMode { Lenient, FailFast };

// Lenient mode passes untranslatable text through unchanged (with a stderr
// warning); FailFast throws.
std::string translate_text(const std::string& text, const std::string& target_lang,
                           const TranslationProvider& provider,
                           TranslationMode mode = TranslationMode::Lenient,
                           GenerationTrace* trace = nullptr);

// ---- Instance (permutation + generated values) -------------------------

struct InstanceEntity {
    const FrozenEntity* source = nullptr;
    std::optional<std::string> header; // display text, post-translation
    std::vector<std::string> values;   // one per table row; single for stacked
};

struct InstanceGroup {
    const FrozenGroup* source = nullptr;
    std::optional<std::string> header;
    std::vector<InstanceEntity> entities;
};

// A permutation populated with fake values, ready for layout. Borrows the
// permutation, which must outlive it.
struct DocumentInstance {
    const DocumentPermutation* permutation = nullptr;
    std::vector<InstanceGroup> groups;
};

// Generates values for every frozen entity (row_count values each for
// tabular groups) and translates headers when `translation` is enabled and a
// provider is given. Deterministic in `rng`.
DocumentInstance instantiate_values(const DocumentPermutation& permutation,
                                    const CommonConfig& common,
                                    const ValueGeneratorRegistry& registry,
                                    const TranslationProvider* provider, TranslationMode mode,
                                    RandomSource& rng, GenerationTrace* trace = nullptr);

// Hex digest over all generated values; constant permutation + varying
// values show up as equal fingerprints with distinct value digests.
std::string value_digest(const DocumentInstance& instance);

// Strips diacritics from Latin text (used for email local parts).
std::string fold_ascii(const std::string& text);

} // namespace docsynth

#endif
