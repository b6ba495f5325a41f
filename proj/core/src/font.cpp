#include "docsynth/font.hpp"

#include "docsynth/unicode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <stdexcept>

namespace docsynth {

namespace {

namespace fs = std::filesystem;

struct Reader {
    const std::vector<std::uint8_t>& d;

    std::uint8_t u8(std::size_t off) const {
        if (off >= d.size()) throw std::runtime_error("font: read past end of table data");
        return d[off];
    }
    std::uint16_t u16(std::size_t off) const {
        return static_cast<std::uint16_t>(u8(off) << 8 | u8(off + 1));
    }
    std::int16_t s16(std::size_t off) const { return static_cast<std::int16_t>(u16(off)); }
    std::uint32_t u32(std::size_t off) const {
        return static_cast<std::uint32_t>(u16(off)) << 16 | u16(off + 2);
    }
};

constexpr std::uint32_t tag(const char (&t)[5]) {
    return static_cast<std::uint32_t>(t[0]) << 24 | static_cast<std::uint32_t>(t[1]) << 16 |
           static_cast<std::uint32_t>(t[2]) << 8 | static_cast<std::uint32_t>(t[3]);
}

} // namespace

std::unique_ptr<TrueTypeFont> TrueTypeFont::load(const std::string& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open font file '" + path + "'");
    auto font = std::unique_ptr<TrueTypeFont>(new TrueTypeFont());
    font->name_ = std::move(name);
    font->data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    Reader r{font->data_};

    std::uint32_t version = r.u32(0);
    if (version != 0x00010000 && version != tag("true"))
        throw std::runtime_error("'" + path + "' is not a TrueType-outline font");
    std::uint16_t num_tables = r.u16(4);
    std::uint32_t head = 0, maxp = 0, hhea = 0, cmap = 0;
    for (std::uint16_t i = 0; i < num_tables; ++i) {
        std::size_t rec = 12 + std::size_t(16) * i;
        std::uint32_t t = r.u32(rec);
        std::uint32_t off = r.u32(rec + 8);
        if (t == tag("head")) head = off;
        else if (t == tag("maxp")) maxp = off;
        else if (t == tag("hhea")) hhea = off;
        else if (t == tag("hmtx")) font->hmtx_ = off;
        else if (t == tag("cmap")) cmap = off;
        else if (t == tag("loca")) font->loca_ = off;
        else if (t == tag("glyf")) font->glyf_ = off;
    }
    if (!head || !maxp || !hhea || !font->hmtx_ || !cmap || !font->loca_ || !font->glyf_)
        throw std::runtime_error("'" + path + "' lacks a required TrueType table");

    font->units_per_em_ = r.u16(head + 18);
    font->long_loca_ = r.s16(head + 50) != 0;
    font->num_glyphs_ = r.u16(maxp + 4);
    font->ascent_ = r.s16(hhea + 4);
    font->descent_ = -r.s16(hhea + 6);
    font->line_gap_ = r.s16(hhea + 8);
    font->num_hmetrics_ = r.u16(hhea + 34);

    // Choose the best unicode cmap subtable: format 12 if present, else 4.
    std::uint16_t sub_count = r.u16(cmap + 2);
    std::uint32_t best = 0;
    int best_score = 0;
    for (std::uint16_t i = 0; i < sub_count; ++i) {
        std::size_t rec = cmap + 4 + std::size_t(8) * i;
        std::uint16_t platform = r.u16(rec);
        std::uint16_t encoding = r.u16(rec + 2);
        std::uint32_t off = cmap + r.u32(rec + 4);
        std::uint16_t format = r.u16(off);
        int score = 0;
        if (format == 12 && (platform == 3 && encoding == 10)) score = 5;
        else if (format == 12 && platform == 0) score = 4;
        else if (format == 4 && (platform == 3 && encoding == 1)) score = 3;
        else if (format == 4 && platform == 0) score = 2;
        if (score > best_score) {
            best_score = score;
            best = off;
            font->cmap_format_ = format;
        }
    }
    if (!best) throw std::runtime_error("'" + path + "' has no usable unicode cmap");
    font->cmap_sub_ = best;
    return font;
}

std::uint16_t TrueTypeFont::glyph_index(std::uint32_t cp) const {
    Reader r{data_};
    if (cmap_format_ == 12) {
        std::uint32_t groups = r.u32(cmap_sub_ + 12);
        std::uint32_t lo = 0, hi = groups;
        while (lo < hi) {
            std::uint32_t mid = (lo + hi) / 2;
            std::size_t rec = cmap_sub_ + 16 + std::size_t(12) * mid;
            std::uint32_t start = r.u32(rec), end = r.u32(rec + 4);
            if (cp < start) hi = mid;
            else if (cp > end) lo = mid + 1;
            else return static_cast<std::uint16_t>(r.u32(rec + 8) + (cp - start));
        }
        return 0;
    }
    if (cp > 0xFFFF) return 0;
    std::uint16_t seg_count = r.u16(cmap_sub_ + 6) / 2;
    std::size_t ends = cmap_sub_ + 14;
    std::size_t starts = ends + 2 * std::size_t(seg_count) + 2;
    std::size_t deltas = starts + 2 * std::size_t(seg_count);
    std::size_t range_offsets = deltas + 2 * std::size_t(seg_count);
    for (std::uint16_t seg = 0; seg < seg_count; ++seg) {
        if (cp > r.u16(ends + 2 * std::size_t(seg))) continue;
        std::uint16_t start = r.u16(starts + 2 * std::size_t(seg));
        if (cp < start) return 0;
        std::uint16_t delta = r.u16(deltas + 2 * std::size_t(seg));
        std::uint16_t range_offset = r.u16(range_offsets + 2 * std::size_t(seg));
        if (range_offset == 0)
            return static_cast<std::uint16_t>((cp + delta) & 0xFFFF);
        std::size_t idx = range_offsets + 2 * std::size_t(seg) + range_offset +
                          2 * (std::size_t(cp) - start);
        std::uint16_t glyph = r.u16(idx);
        if (glyph == 0) return 0;
        return static_cast<std::uint16_t>((glyph + delta) & 0xFFFF);
    }
    return 0;
}

int TrueTypeFont::advance_units(std::uint16_t glyph) const {
    Reader r{data_};
    if (glyph < num_hmetrics_) return r.u16(hmtx_ + std::size_t(4) * glyph);
    return r.u16(hmtx_ + std::size_t(4) * (num_hmetrics_ - 1));
}

bool TrueTypeFont::glyph_range(std::uint16_t glyph, std::uint32_t& begin, std::uint32_t& end) const {
    if (glyph >= num_glyphs_) return false;
    Reader r{data_};
    if (long_loca_) {
        begin = r.u32(loca_ + std::size_t(4) * glyph);
        end = r.u32(loca_ + std::size_t(4) * glyph + 4);
    } else {
        begin = 2u * r.u16(loca_ + std::size_t(2) * glyph);
        end = 2u * r.u16(loca_ + std::size_t(2) * glyph + 2);
    }
    return end > begin;
}

GlyphBox TrueTypeFont::glyph_box(std::uint16_t glyph) const {
    GlyphBox box;
    std::uint32_t begin, end;
    if (!glyph_range(glyph, begin, end)) return box;
    Reader r{data_};
    std::size_t g = glyf_ + begin;
    box.x_min = r.s16(g + 2);
    box.y_min = r.s16(g + 4);
    box.x_max = r.s16(g + 6);
    box.y_max = r.s16(g + 8);
    box.empty = false;
    return box;
}

void TrueTypeFont::append_outline(std::uint16_t glyph, GlyphOutline& out, float a, float b,
                                  float c, float d, float dx, float dy, int depth) const {
    if (depth > 4) return;
    std::uint32_t begin, end;
    if (!glyph_range(glyph, begin, end)) return;
    Reader r{data_};
    std::size_t g = glyf_ + begin;
    int contours = r.s16(g);

    if (contours >= 0) {
        std::size_t end_pts = g + 10;
        std::size_t n_points = 0;
        for (int i = 0; i < contours; ++i)
            n_points = r.u16(end_pts + 2 * std::size_t(i)) + 1;
        std::size_t instr_len = r.u16(end_pts + 2 * std::size_t(contours));
        std::size_t p = end_pts + 2 * std::size_t(contours) + 2 + instr_len;

        std::vector<std::uint8_t> flags(n_points);
        for (std::size_t i = 0; i < n_points;) {
            std::uint8_t f = r.u8(p++);
            flags[i++] = f;
            if (f & 0x08) {
                std::uint8_t repeat = r.u8(p++);
                while (repeat-- && i < n_points) flags[i++] = f;
            }
        }
        std::vector<int> xs(n_points), ys(n_points);
        int v = 0;
        for (std::size_t i = 0; i < n_points; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x02) {
                int step = r.u8(p++);
                v += (f & 0x10) ? step : -step;
            } else if (!(f & 0x10)) {
                v += r.s16(p);
                p += 2;
            }
            xs[i] = v;
        }
        v = 0;
        for (std::size_t i = 0; i < n_points; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x04) {
                int step = r.u8(p++);
                v += (f & 0x20) ? step : -step;
            } else if (!(f & 0x20)) {
                v += r.s16(p);
                p += 2;
            }
            ys[i] = v;
        }

        std::size_t first = 0;
        for (int ci = 0; ci < contours; ++ci) {
            std::size_t last = r.u16(end_pts + 2 * std::size_t(ci));
            GlyphOutline::Contour contour;
            for (std::size_t i = first; i <= last && i < n_points; ++i) {
                float ux = static_cast<float>(xs[i]);
                float uy = static_cast<float>(ys[i]);
                contour.xs.push_back(a * ux + c * uy + dx);
                contour.ys.push_back(b * ux + d * uy + dy);
                contour.on_curve.push_back((flags[i] & 0x01) != 0);
            }
            if (contour.xs.size() >= 2) out.contours.push_back(std::move(contour));
            first = last + 1;
        }
        return;
    }

    // Composite glyph: components with offsets and optional 2x2 transforms.
    std::size_t p = g + 10;
    for (;;) {
        std::uint16_t flags = r.u16(p);
        std::uint16_t component = r.u16(p + 2);
        p += 4;
        float arg1, arg2;
        if (flags & 0x0001) {
            arg1 = r.s16(p);
            arg2 = r.s16(p + 2);
            p += 4;
        } else {
            arg1 = static_cast<std::int8_t>(r.u8(p));
            arg2 = static_cast<std::int8_t>(r.u8(p + 1));
            p += 2;
        }
        float ca = 1, cb = 0, cc = 0, cd = 1;
        if (flags & 0x0008) {
            ca = cd = r.s16(p) / 16384.0f;
            p += 2;
        } else if (flags & 0x0040) {
            ca = r.s16(p) / 16384.0f;
            cd = r.s16(p + 2) / 16384.0f;
            p += 4;
        } else if (flags & 0x0080) {
            ca = r.s16(p) / 16384.0f;
            cb = r.s16(p + 2) / 16384.0f;
            cc = r.s16(p + 4) / 16384.0f;
            cd = r.s16(p + 6) / 16384.0f;
            p += 8;
        }
        float odx = 0, ody = 0;
        if (flags & 0x0002) { // args are x/y offsets
            odx = arg1;
            ody = arg2;
        }
        // compose child transform with the incoming one
        float na = a * ca + c * cb;
        float nb = b * ca + d * cb;
        float nc = a * cc + c * cd;
        float nd = b * cc + d * cd;
        float ndx = a * odx + c * ody + dx;
        float ndy = b * odx + d * ody + dy;
        if (component != glyph)
            append_outline(component, out, na, nb, nc, nd, ndx, ndy, depth + 1);
        if (!(flags & 0x0020)) break;
    }
}

GlyphOutline TrueTypeFont::glyph_outline(std::uint16_t glyph) const {
    GlyphOutline out;
    append_outline(glyph, out, 1, 0, 0, 1, 0, 0, 0);
    return out;
}

FontLibrary FontLibrary::load_dir(const std::string& dir) {
    FontLibrary library;
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".ttf") files.push_back(entry.path());
    }
    if (ec) throw std::runtime_error("cannot read font directory '" + dir + "': " + ec.message());
    std::sort(files.begin(), files.end());
    for (const auto& path : files)
        library.faces_.push_back(TrueTypeFont::load(path.string(), path.stem().string()));
    if (library.faces_.empty())
        throw std::runtime_error("font directory '" + dir + "' contains no .ttf files");
    for (const auto& f : library.faces_)
        if (f->name() == "DejaVuSans") library.fallback_ = f.get();
    if (!library.fallback_) library.fallback_ = library.faces_.front().get();
    return library;
}

std::vector<std::string> FontLibrary::face_names() const {
    std::vector<std::string> names;
    for (const auto& f : faces_) names.push_back(f->name());
    return names;
}

bool FontLibrary::has_face(const std::string& name) const {
    for (const auto& f : faces_)
        if (f->name() == name) return true;
    return false;
}

const TrueTypeFont& FontLibrary::face(const std::string& name) const {
    for (const auto& f : faces_)
        if (f->name() == name) return *f;
    throw std::runtime_error("unknown font face '" + name + "'");
}

const TrueTypeFont& FontLibrary::fallback() const { return *fallback_; }

namespace {

void warn_missing_glyph(const std::string& face, std::uint32_t cp) {
    static std::mutex mutex;
    static std::set<std::pair<std::string, std::uint32_t>> seen;
    std::lock_guard<std::mutex> lock(mutex);
    if (seen.emplace(face, cp).second)
        std::cerr << "warning: face '" << face << "' lacks glyph for U+" << std::hex << cp
                  << std::dec << ", using fallback\n";
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

int line_height_px(const TrueTypeFont& face, int size_px) {
    double scale = static_cast<double>(size_px) / face.units_per_em();
    return static_cast<int>(std::ceil(face.ascent_units() * scale)) +
           static_cast<int>(std::ceil(face.descent_units() * scale));
}

ShapedBlock shape_block(const FontLibrary& library, const std::string& face_name, int size_px,
                        double space_weight, const std::string& text) {
    const TrueTypeFont& primary = library.face(face_name);
    const TrueTypeFont& fallback = library.fallback();
    double scale = static_cast<double>(size_px) / primary.units_per_em();
    double metric_ascent = primary.ascent_units() * scale;
    double metric_descent = primary.descent_units() * scale;
    std::uint16_t space_glyph = primary.glyph_index(' ');
    double space_advance = primary.advance_units(space_glyph) * scale * space_weight;

    ShapedBlock block;
    std::vector<std::string> raw_lines;
    {
        std::string current;
        for (char c : text) {
            if (c == '\n') {
                raw_lines.push_back(current);
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        raw_lines.push_back(current);
    }

    for (const auto& raw : raw_lines) {
        ShapedLine line;
        double pen = 0.0;
        double ink_top = 0.0;    // px above baseline, >= 0
        double ink_bottom = 0.0; // px below baseline, >= 0
        bool line_has_ink = false;

        for (const auto& word : split_ws(raw)) {
            if (!line.tokens.empty()) pen += space_advance;
            ShapedToken token;
            token.text = word;
            token.pen_start = pen;
            for (std::uint32_t cp : decode_utf8(word)) {
                const TrueTypeFont* face = &primary;
                std::uint16_t glyph = primary.glyph_index(cp);
                if (glyph == 0) {
                    std::uint16_t fb = fallback.glyph_index(cp);
                    if (fb != 0) {
                        warn_missing_glyph(primary.name(), cp);
                        face = &fallback;
                        glyph = fb;
                    }
                }
                double face_scale = static_cast<double>(size_px) / face->units_per_em();
                GlyphBox box = face->glyph_box(glyph);
                if (!box.empty) {
                    double gx0 = pen + box.x_min * face_scale;
                    double gx1 = pen + box.x_max * face_scale;
                    if (!token.has_ink) {
                        token.ink_min = gx0;
                        token.ink_max = gx1;
                        token.has_ink = true;
                    } else {
                        token.ink_min = std::min(token.ink_min, gx0);
                        token.ink_max = std::max(token.ink_max, gx1);
                    }
                    ink_top = std::max(ink_top, box.y_max * face_scale);
                    ink_bottom = std::max(ink_bottom, -box.y_min * face_scale);
                }
                token.glyphs.push_back({face, glyph, pen, face_scale});
                pen += face->advance_units(glyph) * face_scale;
            }
            token.pen_end = pen;
            if (!token.has_ink) { // e.g. degenerate all-notdef token
                token.ink_min = token.pen_start;
                token.ink_max = token.pen_end;
            }
            if (!line.text.empty()) line.text += ' ';
            line.text += word;
            line.tokens.push_back(std::move(token));
        }

        line_has_ink = !line.tokens.empty();
        if (line_has_ink) {
            line.ink_min = line.tokens.front().ink_min;
            line.ink_max = line.tokens.front().ink_max;
            for (const auto& t : line.tokens) {
                line.ink_min = std::min(line.ink_min, t.ink_min);
                line.ink_max = std::max(line.ink_max, t.ink_max);
            }
        }
        line.ascent = static_cast<int>(std::ceil(std::max(metric_ascent, ink_top)));
        line.descent = static_cast<int>(std::ceil(std::max(metric_descent, ink_bottom)));

        if (!block.normalized_text.empty()) block.normalized_text += '\n';
        block.normalized_text += line.text;
        block.lines.push_back(std::move(line));
    }

    for (const auto& line : block.lines) {
        block.width = std::max(block.width, line.span());
        block.height += line.height();
    }
    return block;
}

int ShapedLine::span() const {
    if (tokens.empty()) return 0;
    return static_cast<int>(std::ceil(ink_max)) - static_cast<int>(std::floor(ink_min));
}

BlockExtent FontMeasurer::measure_block(const std::string& text, const std::string& face,
                                        int size_px) const {
    ShapedBlock block = shape_block(library_, face, size_px, space_weight_, text);
    return {block.width, block.height, static_cast<int>(block.lines.size())};
}

} // namespace docsynth
