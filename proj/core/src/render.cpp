#include "docsynth/render.hpp"

#include <algorithm>
#include <cmath>

namespace docsynth {

std::vector<std::string> TokenizedText::flat() const {
    std::vector<std::string> out;
    for (const auto& line : lines)
        for (const auto& token : line) out.push_back(token);
    return out;
}

TokenizedText tokenize_words(const std::string& value) {
    TokenizedText out;
    std::vector<std::string> current_line;
    std::string current;
    auto flush_token = [&]() {
        if (!current.empty()) {
            current_line.push_back(std::move(current));
            current.clear();
        }
    };
    for (char c : value) {
        if (c == '\n') {
            flush_token();
            out.lines.push_back(std::move(current_line));
            current_line.clear();
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            flush_token();
        } else {
            current.push_back(c);
        }
    }
    flush_token();
    out.lines.push_back(std::move(current_line));
    return out;
}

namespace {

// Anti-aliased scanline rasterizer: flattened outline edges accumulate
// signed per-cell winding deltas; a per-row prefix sum yields coverage
// (nonzero rule via the absolute value).
class CoverageRaster {
public:
    CoverageRaster(int w, int h) : w_(w), h_(h), acc_(std::size_t(w) * h + 4, 0.0f) {}

    void add_segment(float x0, float y0, float x1, float y1) {
        if (y0 == y1) return;
        float dir = 1.0f;
        if (y0 > y1) {
            std::swap(x0, x1);
            std::swap(y0, y1);
            dir = -1.0f;
        }
        float dxdy = (x1 - x0) / (y1 - y0);
        float x = x0;
        if (y0 < 0.0f) {
            x -= y0 * dxdy;
            y0 = 0.0f;
        }
        int y_start = static_cast<int>(std::floor(y0));
        int y_end = std::min(h_, static_cast<int>(std::ceil(y1)));
        for (int y = std::max(0, y_start); y < y_end; ++y) {
            std::size_t row = std::size_t(y) * w_;
            float dy = std::min(float(y + 1), y1) - std::max(float(y), y0);
            float xnext = x + dxdy * dy;
            float d = dy * dir;
            float lo = x, hi = xnext;
            if (lo > hi) std::swap(lo, hi);
            lo = std::clamp(lo, 0.0f, float(w_ - 1));
            hi = std::clamp(hi, 0.0f, float(w_ - 1));
            float lo_floor = std::floor(lo);
            int lo_i = static_cast<int>(lo_floor);
            float hi_ceil = std::ceil(hi);
            int hi_i = static_cast<int>(hi_ceil);
            if (hi_i <= lo_i + 1) {
                float mid = 0.5f * (lo + hi) - lo_floor;
                acc_[row + lo_i] += d * (1.0f - mid);
                acc_[row + lo_i + 1] += d * mid;
            } else {
                float inv = 1.0f / (hi - lo);
                float lo_f = lo - lo_floor;
                float a0 = 0.5f * inv * (1.0f - lo_f) * (1.0f - lo_f);
                float hi_f = hi - hi_ceil + 1.0f;
                float am = 0.5f * inv * hi_f * hi_f;
                acc_[row + lo_i] += d * a0;
                if (hi_i == lo_i + 2) {
                    acc_[row + lo_i + 1] += d * (1.0f - a0 - am);
                } else {
                    float a1 = inv * (1.5f - lo_f);
                    acc_[row + lo_i + 1] += d * (a1 - a0);
                    for (int xi = lo_i + 2; xi < hi_i - 1; ++xi) acc_[row + xi] += d * inv;
                    float a2 = a1 + float(hi_i - lo_i - 3) * inv;
                    acc_[row + hi_i - 1] += d * (1.0f - a2 - am);
                }
                acc_[row + hi_i] += d * am;
            }
            x = xnext;
        }
    }

    void blend_to(Canvas& canvas, int origin_x, int origin_y, Color color) const {
        for (int y = 0; y < h_; ++y) {
            float acc = 0.0f;
            std::size_t row = std::size_t(y) * w_;
            for (int x = 0; x < w_; ++x) {
                acc += acc_[row + x];
                float cov = std::min(1.0f, std::fabs(acc));
                if (cov > 1.0f / 512.0f)
                    canvas.blend_pixel(origin_x + x, origin_y + y, color, cov);
            }
        }
    }

private:
    int w_;
    int h_;
    std::vector<float> acc_;
};

struct DevicePoint {
    float x, y;
    bool on;
};

void flatten_quad(CoverageRaster& raster, float x0, float y0, float cx, float cy, float x1,
                  float y1) {
    float dx = x0 - 2.0f * cx + x1;
    float dy = y0 - 2.0f * cy + y1;
    float dev = std::sqrt(dx * dx + dy * dy);
    int n = std::clamp(static_cast<int>(std::ceil(std::sqrt(dev * 2.0f))), 1, 24);
    float px = x0, py = y0;
    for (int i = 1; i <= n; ++i) {
        float t = float(i) / n;
        float mt = 1.0f - t;
        float qx = mt * mt * x0 + 2.0f * mt * t * cx + t * t * x1;
        float qy = mt * mt * y0 + 2.0f * mt * t * cy + t * t * y1;
        raster.add_segment(px, py, qx, qy);
        px = qx;
        py = qy;
    }
}

void rasterize_contour(CoverageRaster& raster, const std::vector<DevicePoint>& pts) {
    std::size_t n = pts.size();
    if (n < 2) return;

    // Start from an on-curve point; synthesize one from the wrap-around
    // midpoint when the contour opens off-curve.
    std::size_t first_on = n;
    for (std::size_t i = 0; i < n; ++i)
        if (pts[i].on) {
            first_on = i;
            break;
        }
    DevicePoint start{};
    std::vector<DevicePoint> seq;
    if (first_on == n) {
        start = {0.5f * (pts[n - 1].x + pts[0].x), 0.5f * (pts[n - 1].y + pts[0].y), true};
        seq.assign(pts.begin(), pts.end());
    } else {
        start = pts[first_on];
        for (std::size_t i = 1; i <= n; ++i) seq.push_back(pts[(first_on + i) % n]);
        seq.pop_back(); // the start point itself closes the loop below
    }

    DevicePoint cur = start;
    bool have_ctrl = false;
    DevicePoint ctrl{};
    auto emit_to = [&](const DevicePoint& p) {
        if (have_ctrl) {
            flatten_quad(raster, cur.x, cur.y, ctrl.x, ctrl.y, p.x, p.y);
            have_ctrl = false;
        } else {
            raster.add_segment(cur.x, cur.y, p.x, p.y);
        }
        cur = p;
    };
    for (const auto& p : seq) {
        if (p.on) {
            emit_to(p);
        } else if (have_ctrl) {
            DevicePoint implied{0.5f * (ctrl.x + p.x), 0.5f * (ctrl.y + p.y), true};
            emit_to(implied);
            ctrl = p;
            have_ctrl = true;
        } else {
            ctrl = p;
            have_ctrl = true;
        }
    }
    emit_to(start);
}

void rasterize_line_text(Canvas& canvas, const ShapedLine& line, double pen_origin, int baseline,
                         Color color) {
    if (line.tokens.empty()) return;
    int x_lo = static_cast<int>(std::floor(pen_origin + line.ink_min)) - 1;
    int x_hi = static_cast<int>(std::ceil(pen_origin + line.ink_max)) + 1;
    int y_lo = baseline - line.ascent - 1;
    int y_hi = baseline + line.descent + 1;
    CoverageRaster raster(x_hi - x_lo, y_hi - y_lo);

    for (const auto& token : line.tokens) {
        for (const auto& g : token.glyphs) {
            GlyphOutline outline = g.face->glyph_outline(g.glyph);
            if (outline.contours.empty()) continue;
            for (const auto& contour : outline.contours) {
                std::vector<DevicePoint> pts;
                pts.reserve(contour.xs.size());
                for (std::size_t i = 0; i < contour.xs.size(); ++i) {
                    float dx = static_cast<float>(pen_origin + g.x + contour.xs[i] * g.scale - x_lo);
                    float dy = static_cast<float>(baseline - contour.ys[i] * g.scale - y_lo);
                    pts.push_back({dx, dy, contour.on_curve[i]});
                }
                rasterize_contour(raster, pts);
            }
        }
    }
    raster.blend_to(canvas, x_lo, y_lo, color);
}

constexpr Color kOverlayColor{220, 30, 30};

} // namespace

RenderResult render_document(const DocumentInstance& instance, const LayoutPlan& plan,
                             const FontLibrary& fonts, const StructuralConfig& st,
                             bool debug_overlay) {
    const StyleChoice& style = instance.permutation->style;
    RenderResult result{Canvas(st.canvas_width, st.canvas_height, style.canvas_color), {}};
    Canvas& canvas = result.canvas;

    for (const auto& placed : plan.placements) {
        const Rect origin = placed.rect;
        for (const auto& sep : placed.content.separators) {
            int x = origin.x + sep.x;
            int y = origin.y + sep.y;
            if (sep.horizontal)
                canvas.draw_hline(x, x + sep.length - 1, y, style.value_font.color);
            else
                canvas.draw_vline(x, y, y + sep.length - 1, style.value_font.color);
        }

        for (const auto& block : placed.content.blocks) {
            ShapedBlock shaped = shape_block(fonts, block.font.face, block.font.size,
                                             st.space_width_weight, block.text);
            RenderedEntity entity;
            entity.label = block.label;
            entity.role = block.role;
            entity.value = shaped.normalized_text;

            int y = origin.y + block.y;
            for (const auto& line : shaped.lines) {
                if (line.tokens.empty()) {
                    y += line.height();
                    continue;
                }
                int line_x = origin.x + block.x +
                             aligned_offset(block.line_align, block.width, line.span());
                double pen_origin = line_x - line.ink_min;
                int baseline = y + line.ascent;
                rasterize_line_text(canvas, line, pen_origin, baseline, block.font.color);

                for (const auto& token : line.tokens) {
                    RenderedToken rt;
                    rt.text = token.text;
                    int tx0 = static_cast<int>(std::floor(pen_origin + token.ink_min));
                    int tx1 = static_cast<int>(std::ceil(pen_origin + token.ink_max));
                    rt.box = Rect{tx0, y, tx1 - tx0, line.height()};
                    entity.tokens.push_back(std::move(rt));
                }
                y += line.height();
            }

            if (entity.tokens.empty()) continue;
            Rect box = entity.tokens.front().box;
            for (const auto& t : entity.tokens) box = Rect::bounding_union(box, t.box);
            entity.box = box;
            result.entities.push_back(std::move(entity));
        }
    }

    if (debug_overlay) {
        for (const auto& placed : plan.placements) canvas.draw_rect_outline(placed.rect, kOverlayColor);
        for (const auto& e : result.entities) canvas.draw_rect_outline(e.box, kOverlayColor);
    }
    return result;
}

} // namespace docsynth
