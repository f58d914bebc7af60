#include "f2ext/chart.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <sstream>
#include <stdexcept>

namespace f2ext {

void ChartDoc::validate() const
{
    for (const auto& e : edges)
        if (e.from >= dots.size() || e.to >= dots.size())
            throw std::invalid_argument(
                fmt::format("chart edge {} -> {} references a missing dot", e.from, e.to));
}

namespace {

constexpr int kCell = 24;   /* grid cell size in px */
constexpr int kMargin = 40; /* axes margin */

struct Frame {
    int xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    double px(double x) const { return kMargin + (x - xmin) * kCell + kCell / 2.0; }
    double py(double y) const
    {
        return kMargin + (ymax - y) * kCell + kCell / 2.0; /* y grows upward */
    }
};

std::string edge_color(const std::string& kind)
{
    if (kind == "v2")
        return "#777777";
    if (kind == "h1")
        return "#000000";
    if (kind == "h2")
        return "#3355bb";
    if (kind.rfind("d_", 0) == 0)
        return "#bb3333";
    return "#888888";
}

std::string edge_dash(const std::string& kind)
{
    if (kind == "v2")
        return " stroke-dasharray=\"4 3\"";
    return "";
}

}  // namespace

std::string render_svg(const ChartDoc& doc)
{
    doc.validate();
    Frame fr;
    for (const auto& d : doc.dots) {
        fr.xmax = std::max(fr.xmax, d.x + 1);
        fr.ymax = std::max(fr.ymax, d.y + 1);
        fr.xmin = std::min(fr.xmin, d.x);
        fr.ymin = std::min(fr.ymin, d.y);
    }
    int width = kMargin * 2 + (fr.xmax - fr.xmin + 1) * kCell;
    int height = kMargin * 2 + (fr.ymax - fr.ymin + 1) * kCell;

    std::string svg;
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                       "width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                       width, height, width, height);
    svg += "<style>.dot{fill:#000;}.lbl{font:9px sans-serif;fill:#444;}"
           ".axis{stroke:#000;stroke-width:1;}th{font:11px sans-serif;}</style>\n";

    /* axes with integer ticks */
    svg += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                       kMargin / 2, fr.py(fr.ymin) + kCell, width - kMargin / 2,
                       fr.py(fr.ymin) + kCell);
    svg += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                       fr.px(fr.xmin) - kCell, kMargin / 2, fr.px(fr.xmin) - kCell,
                       height - kMargin / 2);
    for (int x = fr.xmin; x <= fr.xmax; x += (fr.xmax - fr.xmin >= 40 ? 5 : 1))
        svg += fmt::format("<text class=\"lbl\" x=\"{}\" y=\"{}\">{}</text>\n", fr.px(x) - 3,
                           fr.py(fr.ymin) + kCell + 14, x);
    for (int y = fr.ymin; y <= fr.ymax; y += (fr.ymax - fr.ymin >= 40 ? 5 : 1))
        svg += fmt::format("<text class=\"lbl\" x=\"{}\" y=\"{}\">{}</text>\n",
                           fr.px(fr.xmin) - kCell - 16, fr.py(y) + 3, y);

    /* overlays first so dots draw on top */
    for (const auto& ln : doc.lines) {
        double x0 = fr.xmin, x1 = fr.xmax;
        svg += fmt::format("<line stroke=\"#aaaaaa\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" "
                           "y2=\"{:.1f}\"/>\n",
                           fr.px(x0), fr.py(ln.slope * x0 + ln.intercept), fr.px(x1),
                           fr.py(ln.slope * x1 + ln.intercept));
    }
    for (const auto& pb : doc.parabolas) {
        /* x = (4/M) y^2 - 3y + 6 sampled at half-integer heights */
        double slash = pb.mass.find('/') == std::string::npos
                           ? std::stod(pb.mass)
                           : std::stod(pb.mass.substr(0, pb.mass.find('/'))) /
                                 std::stod(pb.mass.substr(pb.mass.find('/') + 1));
        std::string pts;
        for (double y = fr.ymin; y <= fr.ymax; y += 0.5) {
            double x = 4.0 / slash * y * y - 3 * y + 6;
            if (x > fr.xmax + 1)
                break;
            pts += fmt::format("{:.1f},{:.1f} ", fr.px(x), fr.py(y));
        }
        svg += fmt::format("<polyline fill=\"none\" stroke=\"#cc8899\" points=\"{}\"/>\n", pts);
    }

    for (const auto& e : doc.edges) {
        const auto& a = doc.dots[e.from];
        const auto& b = doc.dots[e.to];
        svg += fmt::format("<line stroke=\"{}\"{} x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" "
                           "y2=\"{:.1f}\"><title>{}</title></line>\n",
                           edge_color(e.kind), edge_dash(e.kind), fr.px(a.x), fr.py(a.y),
                           fr.px(b.x), fr.py(b.y), e.kind);
    }

    /* dots: counts <= 4 as clustered marks, larger as a numeral */
    for (const auto& d : doc.dots) {
        double cx = fr.px(d.x), cy = fr.py(d.y);
        std::string title = d.label.empty() ? fmt::format("({},{})", d.x, d.y) : d.label;
        if (d.count <= 4) {
            static const double off[4][2] = {{0, 0}, {6, 0}, {-6, 0}, {0, -6}};
            static const double off2[2][2] = {{-3.5, 0}, {3.5, 0}};
            static const double off3[3][2] = {{-6, 0}, {0, 0}, {6, 0}};
            static const double off4[4][2] = {{-4, -4}, {4, -4}, {-4, 4}, {4, 4}};
            for (int k = 0; k < d.count; ++k) {
                const double* o = d.count == 1   ? off[0]
                                  : d.count == 2 ? off2[k]
                                  : d.count == 3 ? off3[k]
                                                 : off4[k];
                svg += fmt::format("<circle class=\"dot\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.6\">"
                                   "<title>{}</title></circle>\n",
                                   cx + o[0], cy + o[1], title);
            }
        } else {
            svg += fmt::format("<text class=\"th\" x=\"{:.1f}\" y=\"{:.1f}\">{}"
                               "<title>{}</title></text>\n",
                               cx - 4, cy + 4, d.count, title);
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_tsv(const ChartDoc& doc)
{
    doc.validate();
    std::string out;
    for (const auto& d : doc.dots)
        out += fmt::format("dot\t{}\t{}\t{}\t{}\n", d.x, d.y, d.count, d.label);
    for (const auto& e : doc.edges)
        out += fmt::format("edge\t{}\t{}\t{}\n", e.kind, e.from, e.to);
    for (const auto& l : doc.lines)
        out += fmt::format("line\t{}\t{}\n", l.slope, l.intercept);
    for (const auto& p : doc.parabolas)
        out += fmt::format("parabola\t{}\n", p.mass);
    return out;
}

ChartDoc parse_chart_tsv(const std::string& text)
{
    ChartDoc doc;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto tab = line.find('\t', pos);
            if (tab == std::string::npos) {
                cells.push_back(line.substr(pos));
                break;
            }
            cells.push_back(line.substr(pos, tab - pos));
            pos = tab + 1;
        }
        try {
            if (cells[0] == "dot" && cells.size() >= 4) {
                ChartDoc::Dot d;
                d.x = std::stoi(cells[1]);
                d.y = std::stoi(cells[2]);
                d.count = std::stoi(cells[3]);
                d.label = cells.size() > 4 ? cells[4] : "";
                doc.dots.push_back(std::move(d));
            } else if (cells[0] == "edge" && cells.size() >= 4) {
                doc.edges.push_back(
                    {cells[1], std::stoul(cells[2]), std::stoul(cells[3])});
            } else if (cells[0] == "line" && cells.size() >= 3) {
                doc.lines.push_back({std::stod(cells[1]), std::stod(cells[2])});
            } else if (cells[0] == "parabola" && cells.size() >= 2) {
                doc.parabolas.push_back({cells[1]});
            } else {
                throw std::invalid_argument("unknown row kind");
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument(
                fmt::format("chart tsv line {}: {} ({})", lineno, e.what(), line));
        }
    }
    doc.validate();
    return doc;
}

}  // namespace f2ext
