#include "kd/cli.hpp"

#include "kd/golod.hpp"
#include "kd/koszul.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace kd {

namespace {

using Json = nlohmann::ordered_json;

Json rank_table(const std::map<int, int>& ranks)
{
    Json j = Json::object();
    for (const auto& [n, r] : ranks)
        j[std::to_string(n)] = r;
    return j;
}

Json flag_table(const std::map<int, bool>& flags)
{
    Json j = Json::object();
    for (const auto& [n, b] : flags)
        j[std::to_string(n)] = b;
    return j;
}

// ranks on [lo, hi] with a flag per degree; a missing rank is an uncertified degree
Json certified_table(const std::map<int, int>& ranks, std::pair<int, int> range)
{
    std::map<int, int> r;
    std::map<int, bool> flags;
    for (int n = range.first; n <= range.second; ++n) {
        auto it = ranks.find(n);
        flags[n] = it != ranks.end();
        if (flags[n])
            r[n] = it->second;
    }
    return Json{{"ranks", rank_table(r)}, {"certified", flag_table(flags)}};
}

Json certified_table(const std::map<int, int>& ranks)
{
    if (ranks.empty())
        return certified_table(ranks, {0, -1});
    return certified_table(ranks, {ranks.begin()->first, ranks.rbegin()->first});
}

Json dims(const Space& s)
{
    std::map<int, int> d;
    for (int n = s.window().lo; n <= s.window().hi; ++n)
        d[n] = s.dim(n);
    return rank_table(d);
}

Json window_json(const Window& w)
{
    return Json{{"lo", w.lo}, {"hi", w.hi}, {"vanishes_below", w.below}, {"vanishes_above", w.above}};
}

Json matrix_json(const Mat& m)
{
    Json entries = Json::array();
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, x] : m.col(c))
            entries.push_back(Json::array({r, c, x.str()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json differential_json(const GMap& d)
{
    Json j = Json::object();
    for (const auto& [n, m] : d.blocks())
        if (m.rows() && m.cols())
            j[std::to_string(n)] = matrix_json(m);
    return j;
}

// homology ranks and certified flags on degrees |n| <= cutoff - 1 on the given side
struct HomologyTable {
    std::map<int, int> ranks;
    std::map<int, bool> certified;
};

HomologyTable homology_table(const Complex& x, int lo, int hi)
{
    Homology h(x);
    HomologyTable t;
    for (int n = lo; n <= hi; ++n) {
        t.certified[n] = h.certified(n);
        if (t.certified[n])
            t.ranks[n] = h.rank(n);
    }
    return t;
}

Json homology_json(const HomologyTable& t)
{
    return Json{{"ranks", rank_table(t.ranks)}, {"certified", flag_table(t.certified)}};
}

int side(const DGAlgebra& a) { return a.polarity == Polarity::n ? -1 : 1; }

std::pair<int, int> check_range(int sgn, int cutoff)
{
    return sgn > 0 ? std::make_pair(0, cutoff - 1) : std::make_pair(-(cutoff - 1), 0);
}

std::pair<int, int> bar_range(const DGAlgebra& a, int cutoff) { return check_range(side(a), cutoff); }
std::pair<int, int> ext_range(const DGAlgebra& a, int cutoff) { return check_range(-side(a), cutoff); }

Json acyclic_json(const AcyclicCertificate& c)
{
    Json j{{"cutoff", c.cutoff},
           {"polarity", c.polarity},
           {"checked", {{"lo", c.checked_lo}, {"hi", c.checked_hi}}},
           {"left_ranks", certified_table(c.left_ranks, {c.checked_lo, c.checked_hi})},
           {"right_ranks", certified_table(c.right_ranks, {c.checked_lo, c.checked_hi})},
           {"acyclic", c.acyclic}};
    j["witness"] = c.witness ? Json(*c.witness) : Json(nullptr);
    return j;
}

Json verdict_json(const QuasiIsoVerdict& v)
{
    Json j{{"iso", flag_table(v.iso)}, {"certified", flag_table(v.certified)}, {"all_certified_iso", v.all_certified_iso()}};
    auto f = v.first_failure();
    j["first_failure"] = f ? Json(*f) : Json(nullptr);
    return j;
}

bool vanishes(const Complex& x, int n) { return x.space->determined(n) && x.space->dim(n) == 0; }

// degrees missing from the verdict count when both sides vanish there
ExitStatus verdict_status(const QuasiIsoVerdict& v, const Complex& x, const Complex& y, const std::vector<int>& wanted)
{
    if (v.first_failure())
        return ExitStatus::fail;
    for (int n : wanted) {
        if (!v.certified.count(n) && vanishes(x, n) && vanishes(y, n))
            continue;
        if (!v.certified.count(n) || !v.certified.at(n))
            return ExitStatus::inconclusive;
    }
    return v.all_certified_iso() ? ExitStatus::pass : ExitStatus::fail;
}

std::vector<int> degrees(std::pair<int, int> r)
{
    std::vector<int> d;
    for (int n = r.first; n <= r.second; ++n)
        d.push_back(n);
    return d;
}

ExitStatus cmd_homology(const AlgebraP& a, const JobConfig& c, Json& out)
{
    const Window& w = a->space()->window();
    out["dims"] = dims(*a->space());
    out["homology"] = homology_json(homology_table(a->cx, w.lo, w.hi));
    if (c.emit_matrices)
        out["differential"] = differential_json(a->cx.d);
    return ExitStatus::pass;
}

ExitStatus cmd_bar(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff);
    out["bar_cutoff"] = b.cutoff;
    out["dims"] = dims(*b.coalg->space());
    auto [lo, hi] = check_range(side(*a), b.cutoff);
    out["homology"] = homology_json(homology_table(b.coalg->cx, lo, hi));
    out["is_twisting"] = is_twisting(*b.coalg, *a, b.tau.map).ok;
    if (c.emit_matrices)
        out["differential"] = differential_json(b.coalg->cx.d);
    return ExitStatus::pass;
}

ExitStatus cmd_cobar(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff);
    CobarConstruction w = cobar(b.coalg, b.cutoff);
    out["object"] = "Omega(B(A))";
    out["dims"] = dims(*w.alg->space());
    auto [lo, hi] = check_range(side(*a), c.cutoff);
    HomologyTable h = homology_table(w.alg->cx, std::min(lo, 0), std::max(hi, 0));
    out["homology"] = homology_json(h);
    ComparisonMorphism m = bar_cobar_counit(b, w);
    out["counit"] = verdict_json(m.verdict);
    out["counit_hypotheses"] = m.hypotheses;
    if (c.emit_matrices)
        out["differential"] = differential_json(w.alg->cx.d);
    std::vector<int> wanted;
    for (const auto& [n, cert] : h.certified)
        if (cert)
            wanted.push_back(n);
    return verdict_status(m.verdict, m.src, m.tgt, wanted);
}

ExitStatus cmd_acyclic(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff);
    AcyclicCertificate cert = acyclic_check(b.tau, c.cutoff);
    out["twisting_map"] = "universal bar twisting map";
    out["certificate"] = acyclic_json(cert);
    if (cert.witness)
        return ExitStatus::fail;
    return cert.acyclic ? ExitStatus::pass : ExitStatus::inconclusive;
}

ExitStatus cmd_ext(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff + 1);
    ExtTable t = ext_ranks(b.tau, trivial_module(a, Side::left), c.cutoff);
    out["module"] = "k";
    out["ext_ranks"] = certified_table(t.ranks, ext_range(*a, c.cutoff));
    out["checked"] = {{"lo", t.checked_lo}, {"hi", t.checked_hi}};
    out["matches_dual_coalgebra"] = t.matches_dual_coalgebra ? Json(*t.matches_dual_coalgebra) : Json(nullptr);
    return ExitStatus::pass;
}

Json presentation_json(const Presentation& p)
{
    Json gens = Json::array();
    for (const auto& [name, d] : p.gens)
        gens.push_back({{"label", name}, {"degree", d}});
    Json rels = Json::array();
    for (const auto& r : p.rels)
        rels.push_back(format_poly(p, r));
    return Json{{"generators", gens}, {"relations", rels}, {"polarity", polarity_name(p.polarity)}};
}

Json homogeneity_json(const TwoHomogeneity& t)
{
    Json j{{"ok", t.ok}, {"checked", {{"lo", t.checked_lo}, {"hi", t.checked_hi}}}};
    j["failure_degree"] = t.failure ? Json(*t.failure) : Json(nullptr);
    return j;
}

ExitStatus cmd_quadratic_dual(const AlgebraP& a, const JobConfig& c, Json& out)
{
    TwoHomogeneity t = two_homogeneous_check(*a);
    out["two_homogeneous"] = homogeneity_json(t);
    if (!t.ok)
        return ExitStatus::fail;
    QuadraticData q = quadratic_dual(a, c.cutoff);
    out["convention"] = KoszulCertificate{}.convention;
    out["dual"] = presentation_json(q.shriek_presentation);
    out["ranks"] = certified_table(q.shriek_ranks, ext_range(*a, c.cutoff));
    return ExitStatus::pass;
}

ExitStatus cmd_koszul(const AlgebraP& a, const JobConfig& c, Json& out)
{
    KoszulCertificate k = koszul_check(a, c.cutoff);
    out["convention"] = k.convention;
    out["two_homogeneous"] = homogeneity_json(k.two_homogeneous);
    out["dual_ranks"] = certified_table(k.shriek_ranks, ext_range(*a, c.cutoff));
    if (k.two_homogeneous.ok) {
        out["acyclicity"] = acyclic_json(k.acyclic);
        out["bar_homology_ranks"] = certified_table(k.bar_ranks, bar_range(*a, c.cutoff));
        out["priddy_ranks"] = certified_table(k.priddy_ranks, bar_range(*a, c.cutoff));
    }
    if (k.koszul) {
        BarConstruction b = bar(a, c.cutoff + 1);
        out["ext_ranks"] = certified_table(ext_ranks(b.tau, trivial_module(a, Side::left), c.cutoff).ranks, ext_range(*a, c.cutoff));
    }
    out["verdict"] = k.koszul ? "koszul" : "not-koszul";
    out["first_failure"] = k.first_failure ? Json(*k.first_failure) : Json(nullptr);
    if (k.koszul)
        return ExitStatus::pass;
    return k.first_failure ? ExitStatus::fail : ExitStatus::inconclusive;
}

ExitStatus cmd_golod(const AlgebraP& a, const JobConfig& c, Json& out)
{
    GolodCertificate g = golod_check(a, c.cutoff);
    const MasseyOperation& o = g.massey;
    out["homology_polarity"] = homology_polarity_name(g.polarity);
    Json products{{"trivial", g.products.trivial}};
    if (g.products.witness)
        products["witness"] = Json::array({o.classes[static_cast<std::size_t>(g.products.witness->first)].label,
                                           o.classes[static_cast<std::size_t>(g.products.witness->second)].label});
    out["product_triviality"] = products;
    Json classes = Json::array();
    for (const auto& h : o.classes)
        classes.push_back({{"label", h.label}, {"degree", h.degree}});
    out["classes"] = classes;
    Json log = Json::array();
    for (const auto& s : o.log) {
        Json t = Json::array();
        for (int k : s.tuple)
            t.push_back(o.classes[static_cast<std::size_t>(k)].label);
        log.push_back({{"tuple", t}, {"ok", s.ok}});
    }
    out["massey_log"] = log;
    if (o.obstruction) {
        Json cls = Json::array();
        for (const auto& [i, x] : o.obstruction->cls)
            cls.push_back(Json::array({i, x.str()}));
        out["obstruction"] = {{"degree", o.obstruction->degree}, {"class", cls}};
    }
    out["acyclicity"] = g.acyclic ? acyclic_json(*g.acyclic) : Json(nullptr);
    out["ext_ranks"] = certified_table(g.ext_ranks, ext_range(*a, c.cutoff));
    out["free_ranks"] = rank_table(g.free_ranks);
    out["ext_mismatch"] = g.ext_mismatch ? Json(*g.ext_mismatch) : Json(nullptr);
    out["verdict"] = golod_verdict_name(g.verdict);
    switch (g.verdict) {
    case GolodVerdict::golod: return ExitStatus::pass;
    case GolodVerdict::not_golod: return ExitStatus::fail;
    default: return ExitStatus::inconclusive;
    }
}

ExitStatus cmd_moore(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff);
    MooreReport r = moore_value_checks(b.tau, c.cutoff);
    Json values = Json::array();
    for (const auto& v : r.values)
        values.push_back({{"name", v.name}, {"ranks", certified_table(v.ranks)}, {"ok", v.ok}});
    out["values"] = values;
    Json units = Json::object();
    bool ok = r.ok;
    for (const auto& [name, m] :
         std::vector<std::pair<std::string, ModuleP>>{{"k", trivial_module(a, Side::left)}, {"A", regular_module(a, Side::left)}}) {
        MooreUnit u = moore_unit_check(b.tau, m, c.cutoff);
        units[name] = {{"checked", u.checked}, {"verdict", verdict_json(u.verdict)}, {"ok", u.ok}};
        ok = ok && u.ok;
    }
    out["units"] = units;
    return ok ? ExitStatus::pass : ExitStatus::fail;
}

ExitStatus cmd_resolve(const AlgebraP& a, const JobConfig& c, Json& out)
{
    BarConstruction b = bar(a, c.cutoff);
    ModuleP k = trivial_module(a, Side::left);
    Resolution r = natural_resolution(b.tau, k);
    out["module"] = "k";
    out["dims"] = dims(*r.complex.space);
    out["verdict"] = verdict_json(r.verdict);
    if (c.emit_matrices)
        out["differential"] = differential_json(r.complex.d);
    auto [lo, hi] = check_range(side(*a), c.cutoff);
    return verdict_status(r.verdict, r.complex, k->cx, degrees({lo, hi}));
}

using Command = ExitStatus (*)(const AlgebraP&, const JobConfig&, Json&);

struct CommandSpec {
    std::string name;
    Command run;
    std::string help;
};

const std::vector<CommandSpec>& command_table()
{
    static const std::vector<CommandSpec> t{
        {"homology", cmd_homology, "dimensions and homology of A"},
        {"bar", cmd_bar, "B(A): dimensions, homology, twisting check"},
        {"cobar", cmd_cobar, "Omega(B(A)) and the counit to A"},
        {"acyclic-check", cmd_acyclic, "acyclicity certificate of the universal bar twisting map"},
        {"ext", cmd_ext, "ranks of Ext_A(k,k)"},
        {"quadratic-dual", cmd_quadratic_dual, "presentation and ranks of the quadratic dual"},
        {"koszul-check", cmd_koszul, "Koszul verdict with first-failure degree"},
        {"golod-check", cmd_golod, "Golod verdict with Massey log"},
        {"moore-check", cmd_moore, "Moore duality values and units"},
        {"resolve", cmd_resolve, "natural free resolution of k"},
    };
    return t;
}

JobResult input_error(Json report, const std::string& kind, const std::string& message)
{
    report["status"] = "input-error";
    report["error"] = {{"kind", kind}, {"message", message}};
    return {ExitStatus::input_error, std::move(report)};
}

std::string status_name(ExitStatus s)
{
    switch (s) {
    case ExitStatus::pass: return "pass";
    case ExitStatus::fail: return "fail";
    case ExitStatus::inconclusive: return "inconclusive";
    default: return "input-error";
    }
}

}  // namespace

const std::vector<std::string>& cli_commands()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> r;
        for (const auto& c : command_table())
            r.push_back(c.name);
        return r;
    }();
    return names;
}

JobResult run_job(const JobConfig& config)
{
    Json report;
    report["schema"] = kReportSchema;
    report["command"] = config.command;
    report["input"] = config.input;
    report["field"] = config.field;
    report["cutoff"] = config.cutoff;

    Command cmd = nullptr;
    for (const auto& c : command_table())
        if (c.name == config.command)
            cmd = c.run;
    if (!cmd)
        return input_error(report, "usage", "unknown command '" + config.command + "'");
    if (config.cutoff < 2)
        return input_error(report, "usage", "cutoff must be at least 2");

    try {
        Field f = Field::parse(config.field);
        Presentation p = config.input_text ? parse_presentation(*config.input_text) : load_presentation(config.input);
        if (config.polarity)
            p.polarity = parse_polarity(*config.polarity);
        check_generator_polarity(p);
        report["polarity"] = polarity_name(p.polarity);
        // materialize one degree beyond the check cutoff
        p.cutoff = std::max(p.cutoff.value_or(0), config.cutoff + 1);
        AlgebraP a = from_presentation(p, f);
        report["algebra_window"] = window_json(a->space()->window());
        Json result = Json::object();
        ExitStatus s = cmd(a, config, result);
        report["status"] = status_name(s);
        report["result"] = std::move(result);
        return {s, std::move(report)};
    } catch (const ParseError& e) {
        JobResult r = input_error(report, "parse", e.what());
        r.report["error"]["line"] = e.line;
        r.report["error"]["column"] = e.column;
        return r;
    } catch (const StructuralError& e) {
        return input_error(report, "structural", e.what());
    } catch (const FieldError& e) {
        return input_error(report, "field", e.what());
    } catch (const std::logic_error& e) {
        report["status"] = "inconclusive";
        report["error"] = {{"kind", "internal"}, {"message", e.what()}};
        return {ExitStatus::inconclusive, std::move(report)};
    } catch (const std::runtime_error& e) {
        return input_error(report, "io", e.what());
    }
}

namespace {

bool degree_keyed(const Json& j)
{
    if (!j.is_object() || j.empty())
        return false;
    for (const auto& [k, v] : j.items()) {
        if (v.is_structured() || k.empty() || k.find_first_not_of("-0123456789") != std::string::npos)
            return false;
    }
    return true;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_text(std::ostream& os, const std::string& key, const Json& v)
{
    if (v.is_object() && v.contains("ranks") && v.contains("certified") && v.size() == 2 &&
        (v["ranks"].empty() || degree_keyed(v["ranks"])) && degree_keyed(v["certified"])) {
        os << key << ":\n";
        os << "  " << std::setw(6) << "degree" << "  " << std::setw(6) << "rank" << "  certified\n";
        for (const auto& [n, c] : v["certified"].items()) {
            std::string rank = v["ranks"].contains(n) ? v["ranks"][n].dump() : "-";
            os << "  " << std::setw(6) << n << "  " << std::setw(6) << rank << "  " << (c.get<bool>() ? "yes" : "no") << "\n";
        }
        return;
    }
    if (degree_keyed(v)) {
        os << key << ":\n";
        for (const auto& [n, x] : v.items())
            os << "  " << std::setw(6) << n << "  " << std::setw(6) << scalar_text(x) << "\n";
        return;
    }
    if (v.is_object() && !v.empty()) {
        for (const auto& [k, x] : v.items())
            render_text(os, key.empty() ? k : key + "." + k, x);
        return;
    }
    os << key << ": " << scalar_text(v) << "\n";
}

}  // namespace

std::string render(const JobResult& r, const std::string& format)
{
    if (format == "json")
        return r.report.dump(2) + "\n";
    std::ostringstream os;
    render_text(os, "", r.report);
    return os.str();
}

int cli_main(int argc, char** argv)
{
    CLI::App app{"Certified computations with DG algebras, bar constructions and twisting maps"};
    app.require_subcommand(1, 1);
    JobConfig config;
    std::string polarity;
    for (const auto& spec : command_table()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("input", config.input, "presentation file")->required();
        sub->add_option("--field", config.field, "gf:<p> or q")->capture_default_str();
        sub->add_option("--cutoff", config.cutoff, "degree cutoff")->capture_default_str();
        sub->add_option("--polarity", polarity, "p or n (overrides the file)")->check(CLI::IsMember({"p", "n"}));
        sub->add_option("--format", config.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
        sub->add_flag("--emit-matrices", config.emit_matrices, "include differential matrices");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitStatus::input_error);
    }
    config.command = app.get_subcommands().front()->get_name();
    if (!polarity.empty())
        config.polarity = polarity;
    JobResult r = run_job(config);
    if (r.status == ExitStatus::input_error)
        std::cerr << "error: " << r.report["error"]["message"].get<std::string>() << "\n";
    std::cout << render(r, config.format);
    return static_cast<int>(r.status);
}

}  // namespace kd
