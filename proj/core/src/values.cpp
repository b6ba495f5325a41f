#include "docsynth/values.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "docsynth/unicode.hpp"

namespace docsynth {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::string> ConsistentPatternState::token_for(std::size_t group_index,
                                                             RandomSource& rng) {
    if (group_index >= groups_.size() || groups_[group_index].empty()) return std::nullopt;
    auto it = chosen_.find(group_index);
    if (it == chosen_.end())
        it = chosen_.emplace(group_index, rng.choice(groups_[group_index])).first;
    return it->second;
}

std::string fold_ascii(const std::string& text) {
    static const std::map<std::uint32_t, char> folds = {
        {0xE0, 'a'}, {0xE1, 'a'}, {0xE2, 'a'}, {0xE3, 'a'}, {0xE4, 'a'}, {0xE5, 'a'},
        {0xE8, 'e'}, {0xE9, 'e'}, {0xEA, 'e'}, {0xEB, 'e'}, {0xEC, 'i'}, {0xED, 'i'},
        {0xEE, 'i'}, {0xEF, 'i'}, {0xF2, 'o'}, {0xF3, 'o'}, {0xF4, 'o'}, {0xF5, 'o'},
        {0xF6, 'o'}, {0xF9, 'u'}, {0xFA, 'u'}, {0xFB, 'u'}, {0xFC, 'u'}, {0xF1, 'n'},
        {0xE7, 'c'}, {0xFD, 'y'},
        {0xC0, 'A'}, {0xC1, 'A'}, {0xC2, 'A'}, {0xC3, 'A'}, {0xC4, 'A'}, {0xC5, 'A'},
        {0xC8, 'E'}, {0xC9, 'E'}, {0xCA, 'E'}, {0xCB, 'E'}, {0xCC, 'I'}, {0xCD, 'I'},
        {0xCE, 'I'}, {0xCF, 'I'}, {0xD2, 'O'}, {0xD3, 'O'}, {0xD4, 'O'}, {0xD5, 'O'},
        {0xD6, 'O'}, {0xD9, 'U'}, {0xDA, 'U'}, {0xDB, 'U'}, {0xDC, 'U'}, {0xD1, 'N'},
        {0xC7, 'C'},
    };
    std::string out;
    for (std::uint32_t cp : decode_utf8(text)) {
        auto it = folds.find(cp);
        if (it != folds.end()) {
            out.push_back(it->second);
        } else if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        }
        // other non-ascii codepoints are dropped
    }
    return out;
}

namespace {

struct LocaleProfile {
    std::vector<std::string> date_formats{"%m/%d/%Y"};
    std::vector<std::string> month_abbr{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    std::vector<std::string> phone_masks{"(###) ###-####"};
    std::string postal_mask = "#####";
    bool currency_suffix = false;
    bool decimal_comma = false;
    std::string default_currency = "$";
    std::string address_line1 = "{number} {street}";
    std::string city_line = "{city}, {region} {postal}";
    std::vector<std::string> unit_formats{"Suite {n}", "Apt {n}"};
    std::string country;
};

struct LocaleData {
    std::string tag;
    std::vector<std::string> first_names;
    std::vector<std::string> last_names;
    std::vector<std::string> streets;
    std::vector<std::string> cities;
    std::vector<std::string> regions;
    std::vector<std::string> company_suffixes;
    std::vector<std::string> words;
    std::vector<std::string> domains;
    LocaleProfile profile;
};

std::vector<std::string> load_word_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing locale data file '" + path.string() + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    if (out.empty()) throw std::runtime_error("locale data file '" + path.string() + "' is empty");
    return out;
}

LocaleProfile load_profile(const fs::path& path) {
    LocaleProfile profile;
    std::ifstream in(path);
    if (!in) return profile; // defaults
    json doc = json::parse(in);
    if (doc.contains("date_formats")) profile.date_formats = doc["date_formats"].get<std::vector<std::string>>();
    if (doc.contains("month_abbr")) profile.month_abbr = doc["month_abbr"].get<std::vector<std::string>>();
    if (doc.contains("phone_masks")) profile.phone_masks = doc["phone_masks"].get<std::vector<std::string>>();
    if (doc.contains("postal_mask")) profile.postal_mask = doc["postal_mask"].get<std::string>();
    if (doc.contains("currency_suffix")) profile.currency_suffix = doc["currency_suffix"].get<bool>();
    if (doc.contains("decimal_comma")) profile.decimal_comma = doc["decimal_comma"].get<bool>();
    if (doc.contains("default_currency")) profile.default_currency = doc["default_currency"].get<std::string>();
    if (doc.contains("address_line1")) profile.address_line1 = doc["address_line1"].get<std::string>();
    if (doc.contains("city_line")) profile.city_line = doc["city_line"].get<std::string>();
    if (doc.contains("unit_formats")) profile.unit_formats = doc["unit_formats"].get<std::vector<std::string>>();
    if (doc.contains("country")) profile.country = doc["country"].get<std::string>();
    return profile;
}

LocaleData load_locale(const fs::path& dir) {
    LocaleData data;
    data.tag = dir.filename().string();
    data.first_names = load_word_list(dir / "first_names.txt");
    data.last_names = load_word_list(dir / "last_names.txt");
    data.streets = load_word_list(dir / "streets.txt");
    data.cities = load_word_list(dir / "cities.txt");
    data.regions = load_word_list(dir / "regions.txt");
    data.company_suffixes = load_word_list(dir / "company_suffixes.txt");
    data.words = load_word_list(dir / "words.txt");
    data.domains = load_word_list(dir / "domains.txt");
    data.profile = load_profile(dir / "profile.json");
    return data;
}

using LocaleTable = std::map<std::string, LocaleData>;

const LocaleData& locale_for(const LocaleTable& table, const GeneratorParams& params) {
    auto it = table.find(params.locale);
    if (it == table.end())
        throw std::runtime_error("unsupported locale '" + params.locale +
                                 "' (no generator bundle data)");
    return it->second;
}

std::string expand_mask(const std::string& mask, RandomSource& rng) {
    std::string out;
    for (char c : mask) {
        if (c == '#')
            out.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
        else
            out.push_back(c);
    }
    return out;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

std::string capitalize(std::string word) {
    if (!word.empty())
        word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    return word;
}

std::string format_grouped_number(long long units, int cents, bool decimal_comma) {
    std::string digits = std::to_string(units);
    std::string grouped;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count && count % 3 == 0) grouped.push_back(decimal_comma ? '.' : ',');
        grouped.push_back(*it);
        ++count;
    }
    std::reverse(grouped.begin(), grouped.end());
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", cents);
    return grouped + (decimal_comma ? ',' : '.') + buf;
}

std::string format_date(const LocaleProfile& profile, const std::string& fmt, int year, int month,
                        int day) {
    char buf[8];
    std::string out = fmt;
    std::snprintf(buf, sizeof buf, "%02d", day);
    out = replace_all(out, "%d", buf);
    std::snprintf(buf, sizeof buf, "%02d", month);
    out = replace_all(out, "%m", buf);
    out = replace_all(out, "%Y", std::to_string(year));
    std::snprintf(buf, sizeof buf, "%02d", year % 100);
    out = replace_all(out, "%y", buf);
    out = replace_all(out, "%b", profile.month_abbr[(month - 1) % 12]);
    return out;
}

} // namespace

ValueGeneratorRegistry ValueGeneratorRegistry::builtin(const std::string& data_dir) {
    auto table = std::make_shared<LocaleTable>();
    fs::path locales_dir = fs::path(data_dir) / "locales";
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(locales_dir, ec)) {
        if (!entry.is_directory()) continue;
        LocaleData data = load_locale(entry.path());
        (*table)[data.tag] = std::move(data);
    }
    if (ec || table->empty())
        throw std::runtime_error("no locale data under '" + locales_dir.string() + "'");

    ValueGeneratorRegistry registry;
    for (const auto& [tag, unused] : *table) registry.locales_.insert(tag);

    auto add = [&](const std::string& type, GeneratorFn fn) {
        registry.register_generator("builtin", type, std::move(fn));
    };

    add("name", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        return rng.choice(d.first_names) + " " + rng.choice(d.last_names);
    });

    add("company", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        switch (rng.uniform_int(0, 2)) {
            case 0:
                return rng.choice(d.last_names) + " " + rng.choice(d.company_suffixes);
            case 1:
                return capitalize(rng.choice(d.words)) + capitalize(rng.choice(d.words)) + " " +
                       rng.choice(d.company_suffixes);
            default:
                return rng.choice(d.last_names) + " & " + rng.choice(d.last_names) + " " +
                       rng.choice(d.company_suffixes);
        }
    });

    add("address_multi_line",
        [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
            const LocaleData& d = locale_for(*table, p);
            const LocaleProfile& profile = d.profile;
            std::string line1 = profile.address_line1;
            line1 = replace_all(line1, "{number}", std::to_string(rng.uniform_int(1, 9999)));
            line1 = replace_all(line1, "{street}", rng.choice(d.streets));
            std::string out = line1;
            if (rng.uniform() < 0.3 && !profile.unit_formats.empty()) {
                std::string unit = rng.choice(profile.unit_formats);
                unit = replace_all(unit, "{n}", std::to_string(rng.uniform_int(1, 99)));
                out += "\n" + unit;
            }
            std::string city = profile.city_line;
            city = replace_all(city, "{city}", rng.choice(d.cities));
            city = replace_all(city, "{region}", rng.choice(d.regions));
            city = replace_all(city, "{postal}", expand_mask(profile.postal_mask, rng));
            out += "\n" + city;
            if (!profile.country.empty() && rng.uniform() < 0.15) out += "\n" + profile.country;
            return out;
        });

    add("date", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        std::string fmt = p.format.empty() ? rng.choice(d.profile.date_formats) : p.format;
        int year = static_cast<int>(rng.uniform_int(2015, 2030));
        int month = static_cast<int>(rng.uniform_int(1, 12));
        int day = static_cast<int>(rng.uniform_int(1, 28));
        return format_date(d.profile, fmt, year, month, day);
    });

    add("phone", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        return expand_mask(rng.choice(d.profile.phone_masks), rng);
    });

    add("email", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        auto lower = [](std::string s) {
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            return s;
        };
        static const std::vector<std::string> separators{".", "_", ""};
        std::string local = lower(fold_ascii(rng.choice(d.first_names))) +
                            rng.choice(separators) + lower(fold_ascii(rng.choice(d.last_names)));
        if (rng.uniform() < 0.3) local += std::to_string(rng.uniform_int(10, 99));
        return local + "@" + rng.choice(d.domains);
    });

    add("currency_amount",
        [table](const GeneratorParams& p, ConsistentPatternState& state, RandomSource& rng) {
            const LocaleData& d = locale_for(*table, p);
            long long lo = p.constraints.min_value.value_or(1);
            long long hi = p.constraints.max_value.value_or(99999);
            long long units = rng.uniform_int(lo, hi);
            int cents = static_cast<int>(rng.uniform_int(0, 99));
            std::string amount = format_grouped_number(units, cents, d.profile.decimal_comma);
            std::string symbol =
                state.token_for(0, rng).value_or(d.profile.default_currency);
            return d.profile.currency_suffix ? amount + " " + symbol : symbol + amount;
        });

    add("alphanumeric_id",
        [](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
            static const std::string charset = "ABCDEFGHJKLMNPQRSTUVWXYZ0123456789";
            int max_len = p.constraints.max_length.value_or(10);
            int min_len = std::min(p.constraints.min_length.value_or(6), max_len);
            if (max_len < 1) throw std::invalid_argument("alphanumeric_id: max_length < 1");
            int len = static_cast<int>(rng.uniform_int(std::max(1, min_len), max_len));
            std::string out;
            for (int i = 0; i < len; ++i) out.push_back(charset[rng.bounded(charset.size())]);
            return out;
        });

    add("integer_quantity",
        [](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
            long long lo = p.constraints.min_value.value_or(1);
            long long hi = p.constraints.max_value.value_or(500);
            return std::to_string(rng.uniform_int(lo, hi));
        });

    add("free_text", [table](const GeneratorParams& p, ConsistentPatternState&, RandomSource& rng) {
        const LocaleData& d = locale_for(*table, p);
        int count = static_cast<int>(rng.uniform_int(3, 8));
        std::string out;
        for (int i = 0; i < count; ++i) {
            if (i) out += " ";
            std::string word = rng.choice(d.words);
            out += i == 0 ? capitalize(word) : word;
        }
        return out;
    });

    return registry;
}

void ValueGeneratorRegistry::register_generator(const std::string& bundle,
                                                const std::string& entity_type, GeneratorFn fn,
                                                bool allow_override) {
    auto& types = bundles_[bundle];
    if (types.count(entity_type) && !allow_override)
        throw std::runtime_error("generator for type '" + entity_type +
                                 "' already registered in bundle '" + bundle + "'");
    types[entity_type] = std::move(fn);
}

void ValueGeneratorRegistry::register_bundle_alias(const std::string& alias,
                                                   const std::string& existing) {
    if (!bundles_.count(existing) && !aliases_.count(existing))
        throw std::runtime_error("cannot alias unknown bundle '" + existing + "'");
    aliases_[alias] = existing;
}

std::string ValueGeneratorRegistry::resolve(const std::string& bundle) const {
    auto it = aliases_.find(bundle);
    return it == aliases_.end() ? bundle : it->second;
}

bool ValueGeneratorRegistry::has_bundle(const std::string& bundle) const {
    return bundles_.count(resolve(bundle)) > 0;
}

bool ValueGeneratorRegistry::has_type(const std::string& bundle,
                                      const std::string& entity_type) const {
    auto it = bundles_.find(resolve(bundle));
    return it != bundles_.end() && it->second.count(entity_type) > 0;
}

std::set<std::string> ValueGeneratorRegistry::entity_types(const std::string& bundle) const {
    std::set<std::string> out;
    auto it = bundles_.find(resolve(bundle));
    if (it != bundles_.end())
        for (const auto& [type, fn] : it->second) out.insert(type);
    return out;
}

std::set<std::string> ValueGeneratorRegistry::bundle_keys() const {
    std::set<std::string> out;
    for (const auto& [key, unused] : bundles_) out.insert(key);
    for (const auto& [key, unused] : aliases_) out.insert(key);
    return out;
}

std::string ValueGeneratorRegistry::generate(const std::string& bundle,
                                             const std::string& entity_type,
                                             const GeneratorParams& params,
                                             ConsistentPatternState& state, RandomSource& rng,
                                             GenerationTrace* trace) const {
    std::string key = resolve(bundle);
    auto bundle_it = bundles_.find(key);
    if (bundle_it == bundles_.end())
        throw std::runtime_error("unknown generator bundle '" + bundle + "'");
    auto type_it = bundle_it->second.find(entity_type);
    if (type_it == bundle_it->second.end())
        throw std::runtime_error("unknown entity type '" + entity_type + "' in bundle '" + key +
                                 "'");
    std::string value = type_it->second(params, state, rng);
    if (value.empty())
        throw std::runtime_error("generator for '" + entity_type + "' produced an empty value");
    if (trace) trace->values_by_source[key + "/" + params.locale] += 1;
    return value;
}

DictionaryTranslationProvider::DictionaryTranslationProvider(const std::string& dir) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
        std::string lang = entry.path().stem().string();
        std::ifstream in(entry.path());
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
            auto tab = line.find('\t');
            if (tab == std::string::npos || tab == 0) continue;
            tables_[lang][line.substr(0, tab)] = line.substr(tab + 1);
        }
    }
    if (ec)
        throw std::runtime_error("cannot read translation directory '" + dir +
                                 "': " + ec.message());
}

std::optional<std::string> DictionaryTranslationProvider::translate(const std::string& text,
                                                                    const std::string& lang) const {
    auto lang_it = tables_.find(lang);
    if (lang_it == tables_.end()) return std::nullopt;
    auto it = lang_it->second.find(text);
    if (it == lang_it->second.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> DictionaryTranslationProvider::languages() const {
    std::set<std::string> out;
    for (const auto& [lang, unused] : tables_) out.insert(lang);
    return out;
}

std::string translate_text(const std::string& text, const std::string& target_lang,
                           const TranslationProvider& provider, TranslationMode mode,
                           GenerationTrace* trace) {
    if (trace) trace->translation_provider = provider.id();
    std::optional<std::string> translated = provider.translate(text, target_lang);
    if (translated) {
        if (trace) trace->headers_translated += 1;
        return *translated;
    }
    if (mode == TranslationMode::FailFast)
        throw std::runtime_error("no translation for '" + text + "' into '" + target_lang + "'");
    std::cerr << "warning: no translation for '" << text << "' into '" << target_lang
              << "', passing through\n";
    if (trace) trace->headers_passthrough += 1;
    return text;
}

DocumentInstance instantiate_values(const DocumentPermutation& permutation,
                                    const CommonConfig& common,
                                    const ValueGeneratorRegistry& registry,
                                    const TranslationProvider* provider, TranslationMode mode,
                                    RandomSource& rng, GenerationTrace* trace) {
    DocumentInstance instance;
    instance.permutation = &permutation;
    ConsistentPatternState state(common.consistent_patterns_for_values);
    GeneratorParams params;
    params.locale = common.faker_locale;

    bool translating = common.translation.enable && provider != nullptr;
    auto localize = [&](const std::string& text) {
        if (!translating) return text;
        return translate_text(text, common.translation.target_lang_code, *provider, mode, trace);
    };

    for (const auto& group : permutation.groups) {
        InstanceGroup ig;
        ig.source = &group;
        if (group.header) ig.header = localize(*group.header);
        int value_count = group.table ? group.table->row_count : 1;
        for (const auto& entity : group.entities) {
            InstanceEntity ie;
            ie.source = &entity;
            if (entity.header) ie.header = localize(*entity.header);
            for (int i = 0; i < value_count; ++i)
                ie.values.push_back(registry.generate(common.generator_key, entity.entity_type,
                                                      params, state, rng, trace));
            ig.entities.push_back(std::move(ie));
        }
        instance.groups.push_back(std::move(ig));
    }
    return instance;
}

std::string value_digest(const DocumentInstance& instance) {
    std::ostringstream out;
    for (const auto& group : instance.groups) {
        out << group.header.value_or("") << "\x1f";
        for (const auto& entity : group.entities) {
            out << entity.header.value_or("") << "\x1f";
            for (const auto& value : entity.values) out << value << "\x1e";
        }
    }
    return fnv1a_hex(out.str());
}

} // namespace docsynth
