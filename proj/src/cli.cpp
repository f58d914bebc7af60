#include "f2ext/cli.hpp"

#include "f2ext/chart.hpp"
#include "f2ext/cobar.hpp"
#include "f2ext/margolis.hpp"
#include "f2ext/resolution.hpp"
#include "f2ext/ssq.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

namespace f2ext {

namespace {

GradedModule load_module(const std::string& path)
{
    std::ifstream in(path);
    if (!in.good())
        throw std::runtime_error(fmt::format("cannot open module file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_module(ss.str());
    } catch (const BrunerError& e) {
        throw std::runtime_error(
            fmt::format("{}: token {}: {}", path, e.token_index, e.what()));
    }
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error(fmt::format("cannot open output file '{}'", path));
    out << content;
}

bool wants_svg(const std::string& out, const std::string& format)
{
    if (format == "svg")
        return true;
    if (format == "tsv")
        return false;
    if (!format.empty())
        throw std::runtime_error(fmt::format("unknown format '{}'", format));
    return out.size() > 4 && out.substr(out.size() - 4) == ".svg";
}

int run_validate(const std::string& module_path, int relation_top)
{
    GradedModule m = load_module(module_path);
    int top = relation_top > 0 ? relation_top : m.top_degree();
    auto report = validate_module(m, top);
    if (report.empty()) {
        fmt::print("OK {} generators\n", m.dim());
        return 0;
    }
    for (const auto& v : report)
        std::cerr << fmt::format("error: adem-violation a={} b={} generator={}\n", v.a, v.b,
                                 v.gen);
    return 1;
}

int run_ext(const std::string& algebra, const std::string& module_path, int smax, int tmax,
            int trunc, const std::string& hlines, const std::string& out,
            const std::string& format)
{
    GradedModule m = module_path.empty() ? trivial_module() : load_module(module_path);
    Profile profile;
    int cap = tmax;
    if (algebra == "A") {
        profile = Profile::full();
        cap = std::max(trunc, tmax);
    } else if (algebra == "A0" || algebra == "A1" || algebra == "A2") {
        profile = Profile::subalgebra_A(algebra[1] - '0');
    } else if (algebra == "EQ0" || algebra == "EQ1" || algebra == "EQ2") {
        profile = Profile::exterior_Q(algebra[2] - '0');
    } else {
        throw std::runtime_error(fmt::format("unknown algebra '{}'", algebra));
    }
    auto report = validate_module(m, std::min(m.top_degree(), tmax));
    if (!report.empty())
        throw std::runtime_error(
            fmt::format("module fails {} Adem relation(s); run `validate` for details",
                        report.size()));
    auto alg = std::make_shared<SteenrodAlgebra>(profile, cap);
    auto full = std::make_shared<SteenrodAlgebra>(Profile::full(),
                                                  std::max(cap, m.top_degree()));
    MinimalResolution res(alg, full, m, smax, tmax);
    ExtChart chart = ext_chart(res);

    std::vector<int> hs;
    if (!hlines.empty()) {
        std::stringstream hss(hlines);
        std::string piece;
        while (std::getline(hss, piece, ','))
            hs.push_back(std::stoi(piece));
    }
    std::map<int, std::map<std::pair<int, int>, F2Matrix>> hmats;
    for (int i : hs)
        hmats[i] = h_multiplication(res, i);

    if (wants_svg(out, format)) {
        ChartDoc doc;
        std::map<std::pair<int, int>, std::size_t> dot_at;
        for (const auto& [key, dim] : chart.dims) {
            auto [s, t] = key;
            dot_at[key] = doc.dots.size();
            doc.dots.push_back({t - s, s, dim,
                                fmt::format("{}", fmt::join(chart.names.at(key), ",")), ""});
        }
        for (const auto& [i, mats] : hmats) {
            for (const auto& [key, mat] : mats) {
                auto [s, t] = key;
                if (mat.is_zero())
                    continue;
                auto from = dot_at.find({s, t});
                auto to = dot_at.find({s + 1, t + (1 << i)});
                if (from != dot_at.end() && to != dot_at.end())
                    doc.edges.push_back({fmt::format("h{}", i), from->second, to->second});
            }
        }
        write_output(out, render_svg(doc));
    } else {
        std::string tsv = "s\tt\tdim\tgenerators\n";
        for (const auto& [key, dim] : chart.dims)
            tsv += fmt::format("{}\t{}\t{}\t{}\n", key.first, key.second, dim,
                               fmt::join(chart.names.at(key), ","));
        write_output(out, tsv);
    }
    return 0;
}

int run_margolis(const std::string& module_path, int qn, int tmax, const std::string& out)
{
    GradedModule m = load_module(module_path);
    auto full = std::make_shared<SteenrodAlgebra>(
        Profile::full(), std::max(m.top_degree(), (1 << (qn + 1)) - 1));
    MargolisResult r = margolis_homology(m, qn, *full, tmax);
    std::string tsv = "degree\tker\tim\thomology\n";
    for (const auto& [d, k] : r.ker_dims)
        tsv += fmt::format("{}\t{}\t{}\t{}\n", d, k, r.im_dims.at(d), r.homology_dims.at(d));
    write_output(out, tsv);
    return 0;
}

int run_cobar(const std::string& preset, int nmax, int tmax, const std::string& out)
{
    HopfPresentation p = hopf_preset(preset, tmax);
    HopfAlgebra h(p, tmax);
    auto c = cobar_cohomology(h, nmax, tmax);
    std::string tsv = "n\tt\tdim\tv-torsion-order\n";
    for (const auto& [key, dim] : c.dims) {
        std::string torsion = "-";
        if (auto it = c.torsion.find(key); it != c.torsion.end())
            torsion = fmt::format("{}", fmt::join(it->second, ","));
        tsv += fmt::format("{}\t{}\t{}\t{}\n", key.first, key.second, dim, torsion);
    }
    write_output(out, tsv);
    return 0;
}

int run_mrss(const std::string& variant, int smax, int tmax, bool ambiguities,
             const std::string& out)
{
    CEVariant v;
    if (variant == "l2")
        v = CEVariant::L2;
    else if (variant == "l2bar")
        v = CEVariant::L2Bar;
    else
        throw std::runtime_error(fmt::format("unknown variant '{}'", variant));
    CEComplex ce(v, smax, tmax);
    auto coh = ce_cohomology(ce);
    std::string tsv;
    if (v == CEVariant::L2Bar) {
        auto tables = mre1_enumerate(smax, tmax, false);
        if (ambiguities) {
            /* hidden v2-extensions are undecidable from E_1 data; list the
             * candidate sites instead of guessing */
            tsv = "s\tt\tf-source\tf-candidate\n";
            for (const auto& a : extension_ambiguities(tables, tmax))
                tsv += fmt::format("{}\t{}\t{}\t{}\n", a.s, a.t_death, a.f_source,
                                   a.f_candidate);
            write_output(out, tsv);
            return 0;
        }
        tsv = "s\tt\tf\tdim\tenum\n";
        std::map<std::tuple<int, int, int>, std::pair<int, int>> merged;
        for (const auto& [key, n] : coh.dims)
            merged[key].first = n;
        for (const auto& [key, n] : tables.counts)
            merged[key].second = n;
        for (const auto& [key, pair] : merged) {
            auto [s, t, f] = key;
            tsv += fmt::format("{}\t{}\t{}\t{}\t{}\n", s, t, f, pair.first, pair.second);
        }
    } else {
        tsv = "s\tt\tf\tdim\n";
        for (const auto& [key, n] : coh.dims) {
            auto [s, t, f] = key;
            tsv += fmt::format("{}\t{}\t{}\t{}\n", s, t, f, n);
        }
    }
    write_output(out, tsv);
    return 0;
}

int run_parabola(const std::string& mass, int nmax, const std::string& out)
{
    auto m = parse_dyadic(mass);
    auto pts = parabola_points(m, 1, nmax);
    std::string tsv = "n\tt-n\tinteger\n";
    for (const auto& [n, r] : pts)
        tsv += fmt::format("{}\t{}\t{}\n", n, r.str(), r.is_integer() ? 1 : 0);
    write_output(out, tsv);
    return 0;
}

int run_chart(const std::string& in_path, const std::string& out, const std::string& line,
              const std::string& parabola_mass)
{
    std::ifstream in(in_path);
    if (!in.good())
        throw std::runtime_error(fmt::format("cannot open chart input '{}'", in_path));
    std::stringstream ss;
    ss << in.rdbuf();
    ChartDoc doc = parse_chart_tsv(ss.str());
    if (!line.empty()) {
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("--line expects slope,intercept");
        doc.lines.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    if (!parabola_mass.empty()) {
        parse_dyadic(parabola_mass); /* reject junk early */
        doc.parabolas.push_back({parabola_mass});
    }
    write_output(out, wants_svg(out, "") || out.empty() ? render_svg(doc) : render_tsv(doc));
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv)
{
    CLI::App app{"exact F2 homological algebra workbench"};
    app.set_config("--config", "", "config file of key = value lines");
    app.require_subcommand(0, 1);

    std::string module_path, out, format, algebra = "A", hlines, variant = "l2bar";
    std::string preset, mass = "1", chart_in, chart_line, chart_parabola;
    int relation_top = 0, smax = 8, tmax = 20, trunc = 0, qn = 2, nmax = 4;

    auto* validate = app.add_subcommand("validate", "parse and Adem-check a Bruner module file");
    validate->add_option("--module", module_path, "Bruner module definition file")->required();
    validate->add_option("--relation-top", relation_top,
                         "check Sq^a Sq^b for a+b up to this degree (default: top degree)");

    auto* ext = app.add_subcommand("ext", "Ext chart via a minimal free resolution");
    ext->add_option("--algebra", algebra, "A | A0 | A1 | A2 | EQ0 | EQ1 | EQ2");
    ext->add_option("--module", module_path, "Bruner module file (default: F2)");
    ext->add_option("--smax", smax, "maximal homological degree")->required();
    ext->add_option("--tmax", tmax, "maximal internal degree")->required();
    ext->add_option("--trunc", trunc, "degree truncation for the full algebra (>= tmax)");
    ext->add_option("--hlines", hlines, "comma list of i for h_i multiplication edges");
    ext->add_option("--out", out, "output file (.tsv or .svg; default stdout)");
    ext->add_option("--format", format, "tsv | svg (overrides the file suffix)");

    auto* marg = app.add_subcommand("margolis", "Margolis homology of a module");
    marg->add_option("--module", module_path, "Bruner module file")->required();
    marg->add_option("--qn", qn, "index n of the Milnor primitive Q_n")->required();
    marg->add_option("--tmax", tmax, "maximal degree")->required();
    marg->add_option("--out", out, "output file (default stdout)");

    auto* cobar = app.add_subcommand("cobar", "cobar cohomology of a Hopf presentation");
    cobar->add_option("--preset", preset,
                      "dual-A0 | dual-A1 | dual-A2 | EQ0 | EQ1 | EQ2 | E0AF-sigma2tilde")
        ->required();
    cobar->add_option("--nmax", nmax, "maximal cobar degree")->required();
    cobar->add_option("--tmax", tmax, "maximal internal degree")->required();
    cobar->add_option("--out", out, "output file (default stdout)");

    bool mrss_ambiguities = false;
    auto* mrss = app.add_subcommand("mrss", "Chevalley-Eilenberg cohomology per MR filtration");
    mrss->add_option("--variant", variant, "l2 | l2bar");
    mrss->add_option("--smax", smax, "maximal cohomological degree")->required();
    mrss->add_option("--tmax", tmax, "maximal internal degree")->required();
    mrss->add_flag("--ambiguities", mrss_ambiguities,
                   "emit candidate hidden-v2-extension sites instead of dims");
    mrss->add_option("--out", out, "output file (default stdout)");

    auto* par = app.add_subcommand("parabola", "evaluate the v2-parabola formula");
    par->add_option("--mass", mass, "positive dyadic mass p/q")->required();
    par->add_option("--nmax", nmax, "last n to evaluate")->required();
    par->add_option("--out", out, "output file (default stdout)");

    auto* chart = app.add_subcommand("chart", "render a chart TSV as SVG");
    chart->add_option("--in", chart_in, "chart TSV input")->required();
    chart->add_option("--out", out, "output file (default stdout, svg)");
    chart->add_option("--line", chart_line, "overlay line slope,intercept");
    chart->add_option("--parabola-mass", chart_parabola, "overlay parabola of this mass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return 2;
    }

    try {
        if (app.got_subcommand(validate))
            return run_validate(module_path, relation_top);
        if (app.got_subcommand(ext))
            return run_ext(algebra, module_path, smax, tmax, trunc, hlines, out, format);
        if (app.got_subcommand(marg))
            return run_margolis(module_path, qn, tmax, out);
        if (app.got_subcommand(cobar))
            return run_cobar(preset, nmax, tmax, out);
        if (app.got_subcommand(mrss))
            return run_mrss(variant, smax, tmax, mrss_ambiguities, out);
        if (app.got_subcommand(par))
            return run_parabola(mass, nmax, out);
        if (app.got_subcommand(chart))
            return run_chart(chart_in, out, chart_line, chart_parabola);
        std::cerr << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return 1;
    }
}

}  // namespace f2ext
