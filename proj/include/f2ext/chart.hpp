#pragma once

#include <map>
#include <string>
#include <vector>

namespace f2ext {

/* Adams-coordinate chart data: dots at (x, y) = (t - s, s) with a
 * multiplicity and optional label, typed edges between dots, and straight-line
 * or parabola overlays. */
struct ChartDoc {
    struct Dot {
        int x, y;
        int count = 1;
        std::string label;
        std::string style;  /* CSS class suffix, may be empty */
    };
    struct Edge {
        std::string kind;  /* v2 | h1 | h2 | d_r | custom */
        std::size_t from, to;
    };
    struct Line {
        double slope, intercept;  /* y = slope * x + intercept */
    };
    struct Parabola {
        std::string mass;  /* dyadic, rendered as x = (4/M) y^2 - 3y + 6 */
    };

    std::vector<Dot> dots;
    std::vector<Edge> edges;
    std::vector<Line> lines;
    std::vector<Parabola> parabolas;

    void validate() const;  /* edge endpoints must reference dots */
};

/* deterministic SVG 1.1; identical docs produce byte-identical output */
std::string render_svg(const ChartDoc& doc);

/* TSV: one row per dot "dot x y count label", per edge "edge kind from to",
 * per overlay "line slope intercept" / "parabola mass" */
std::string render_tsv(const ChartDoc& doc);

/* inverse of render_tsv on dots and edges */
ChartDoc parse_chart_tsv(const std::string& text);

}  // namespace f2ext
