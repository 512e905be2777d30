// Command-line front end: parses groups, functions and windows from compact
// text specs, dispatches to the library, and emits JSON or CSV records.
//
// Exit codes: 0 success, 2 invalid input, 3 resource limit, 64 usage errors.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "yconv/yconv.hpp"

namespace {

using namespace yconv;

// ---------------------------------------------------------------- configuration

struct CliConfig {
    double norm_rel_tol = 1e-12; // default ascent convergence tolerance
    double quadrature_tol = 1e-7;
    std::int64_t sumset_limit = 1'000'000; // pair budget for convolution-shaped loops
    std::int64_t max_grid = 1 << 20;       // quadrature points per axis cap
    std::int64_t window = 30;              // default lattice window radius
    double gamma_p_ge_2 = 1.0;             // partition exponent for p >= 2
    double gamma_p_lt_2 = 0.0;             // 0 = use the p-dependent formula
    std::int64_t oversampling = 8;
    std::string format = "json";
    std::string out; // empty = stdout
};

void apply_kv(CliConfig& cfg, const std::string& key, const std::string& value) {
    auto as_double = [&](double& slot) {
        try {
            std::size_t pos = 0;
            slot = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw invalid_input("config: bad numeric value for " + key + ": '" + value + "'");
        }
    };
    auto as_int = [&](std::int64_t& slot) {
        try {
            std::size_t pos = 0;
            slot = std::stoll(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw invalid_input("config: bad integer value for " + key + ": '" + value + "'");
        }
    };
    if (key == "norm_rel_tol") as_double(cfg.norm_rel_tol);
    else if (key == "quadrature_tol") as_double(cfg.quadrature_tol);
    else if (key == "sumset_limit") as_int(cfg.sumset_limit);
    else if (key == "max_grid") as_int(cfg.max_grid);
    else if (key == "window") as_int(cfg.window);
    else if (key == "gamma_p_ge_2") as_double(cfg.gamma_p_ge_2);
    else if (key == "gamma_p_lt_2") as_double(cfg.gamma_p_lt_2);
    else if (key == "oversampling") as_int(cfg.oversampling);
    else if (key == "format") cfg.format = value;
    else if (key == "out") cfg.out = value;
    else throw invalid_input("config: unknown key '" + key + "'");
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void load_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("config: cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw invalid_input("config: expected key=value, got '" + t + "'");
        apply_kv(cfg, trimmed(t.substr(0, eq)), trimmed(t.substr(eq + 1)));
    }
}

// Environment overrides: YCONV_<KEY> with the key upper-cased.
void apply_env(CliConfig& cfg) {
    static const char* keys[] = {"norm_rel_tol", "quadrature_tol", "sumset_limit", "max_grid",
                                 "window",       "gamma_p_ge_2",   "gamma_p_lt_2", "oversampling",
                                 "format",       "out"};
    for (const char* key : keys) {
        std::string env = "YCONV_";
        for (const char* c = key; *c; ++c)
            env += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
        if (const char* v = std::getenv(env.c_str())) apply_kv(cfg, key, v);
    }
}

void validate_config(const CliConfig& cfg) {
    if (!(cfg.norm_rel_tol > 0.0)) throw invalid_input("config: norm_rel_tol must be > 0");
    if (!(cfg.quadrature_tol > 0.0)) throw invalid_input("config: quadrature_tol must be > 0");
    if (cfg.sumset_limit < 1) throw invalid_input("config: sumset_limit must be >= 1");
    if (cfg.max_grid < 8) throw invalid_input("config: max_grid must be >= 8");
    if (cfg.window < 1) throw invalid_input("config: window must be >= 1");
    if (cfg.oversampling < 1) throw invalid_input("config: oversampling must be >= 1");
    if (cfg.format != "json" && cfg.format != "csv")
        throw invalid_input("config: format must be json or csv");
}

// ---------------------------------------------------------------- text parsing

std::vector<std::string> split_on(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& tok, const char* what) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw invalid_input(std::string(what) + ": '" + tok + "' is not an integer");
    }
}

double parse_double(const std::string& tok, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw invalid_input(std::string(what) + ": '" + tok + "' is not a number");
    }
}

// "Z:d" integer lattice, "F:k" free group, "C:n" cyclic.
GroupDescriptor parse_group(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos || colon + 1 >= spec.size())
        throw invalid_input("group spec must look like Z:1, F:2 or C:6, got '" + spec + "'");
    const std::string head = spec.substr(0, colon);
    const std::int64_t param = parse_int(spec.substr(colon + 1), "group parameter");
    if (head == "Z") return GroupDescriptor::lattice(param);
    if (head == "F") return GroupDescriptor::free_group(param);
    if (head == "C") return GroupDescriptor::cyclic(param);
    throw invalid_input("unknown group family '" + head + "' (use Z, F or C)");
}

// Signed-letter word "+1+2-1"; "e" is the empty word. Reduced on input.
GroupElement parse_free_word(const std::string& tok) {
    if (tok == "e") return {};
    GroupElement word;
    std::size_t i = 0;
    while (i < tok.size()) {
        const char sign = tok[i];
        if (sign != '+' && sign != '-')
            throw invalid_input("free word '" + tok + "': expected + or - before each letter");
        ++i;
        std::size_t j = i;
        while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
        if (j == i) throw invalid_input("free word '" + tok + "': missing letter index");
        const std::int64_t letter = parse_int(tok.substr(i, j - i), "free letter");
        word.push_back(sign == '+' ? letter : -letter);
        i = j;
    }
    return reduce_word(word);
}

GroupElement parse_element(const GroupDescriptor& g, const std::string& tok) {
    switch (g.family) {
        case Family::lattice: {
            const auto parts = split_on(tok, ",");
            GroupElement x;
            for (const auto& part : parts) x.push_back(parse_int(part, "lattice coordinate"));
            require_element(g, x);
            return x;
        }
        case Family::free_group: {
            GroupElement x = parse_free_word(tok);
            require_element(g, x);
            return x;
        }
        case Family::cyclic: {
            GroupElement x{mod_residue(parse_int(tok, "cyclic residue"), g.param)};
            return x;
        }
    }
    throw invalid_input("unreachable group family");
}

// Lattice d >= 2 separates elements with ';' (coordinates use ','); all other
// families accept ',' or ';' between elements.
std::vector<GroupElement> parse_elements(const GroupDescriptor& g, const std::string& spec) {
    const bool multi_coord = g.family == Family::lattice && g.param >= 2;
    const auto toks = split_on(spec, multi_coord ? ";" : ",;");
    if (toks.empty()) throw invalid_input("empty element list");
    std::vector<GroupElement> out;
    out.reserve(toks.size());
    for (const auto& tok : toks) out.push_back(parse_element(g, tok));
    return out;
}

FiniteSubset parse_set(const GroupDescriptor& g, const std::string& spec) {
    return make_subset(g, parse_elements(g, spec));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Function specs: "@file.json", "ind:<set>", "vals:<elem>=<v>;...", or a bare
// set treated as an indicator.
RealFn parse_function(const GroupDescriptor& g, const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        RealFn f = parse_real_fn(read_file(spec.substr(1)));
        if (f.group() != g)
            throw invalid_input("function in '" + spec.substr(1) + "' lives on a different group");
        return f;
    }
    if (spec.rfind("ind:", 0) == 0) return indicator(parse_set(g, spec.substr(4)));
    if (spec.rfind("vals:", 0) == 0) {
        RealFn f(g);
        for (const auto& pair : split_on(spec.substr(5), ";")) {
            const std::size_t eq = pair.rfind('=');
            if (eq == std::string::npos)
                throw invalid_input("vals entry '" + pair + "' needs element=value");
            const double v = parse_double(pair.substr(eq + 1), "function value");
            if (!(v > 0.0)) throw invalid_input("vals entries must be > 0");
            f.add_at(parse_element(g, pair.substr(0, eq)), v);
        }
        if (f.empty()) throw invalid_input("vals spec produced an empty function");
        return f;
    }
    return indicator(parse_set(g, spec));
}

// Same surface for possibly-complex input; files may carry mode "complex".
CplxFn parse_cfunction(const GroupDescriptor& g, const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        const auto j = parse_json_text(read_file(spec.substr(1)));
        CplxFn f(g);
        if (j.is_object() && j.value("mode", "nonnegative_real") == "complex") {
            f = cplx_fn_from_json(j);
        } else {
            const RealFn rf = real_fn_from_json(j);
            for (const auto& [x, v] : rf.values()) f.set(x, {v, 0.0});
        }
        if (f.group() != g)
            throw invalid_input("function in '" + spec.substr(1) + "' lives on a different group");
        return f;
    }
    const RealFn rf = parse_function(g, spec);
    CplxFn f(g);
    for (const auto& [x, v] : rf.values()) f.set(x, {v, 0.0});
    return f;
}

// Windows: "box:R" on lattices, "ball:R" on free groups, "all" on cyclic
// groups, "set:<elements>" anywhere. Empty picks a family default.
FiniteSubset parse_window(const GroupDescriptor& g, const std::string& spec, const CliConfig& cfg) {
    if (spec.empty()) {
        switch (g.family) {
            case Family::lattice: return lattice_box(g.param, cfg.window);
            case Family::cyclic: return cyclic_all(g.param);
            case Family::free_group:
                throw invalid_input("free groups need an explicit --window ball:R");
        }
    }
    if (spec == "all") {
        if (g.family != Family::cyclic) throw invalid_input("window 'all' only fits cyclic groups");
        return cyclic_all(g.param);
    }
    if (spec.rfind("box:", 0) == 0) {
        if (g.family != Family::lattice) throw invalid_input("window 'box:R' only fits lattices");
        return lattice_box(g.param, parse_int(spec.substr(4), "window radius"));
    }
    if (spec.rfind("ball:", 0) == 0) {
        if (g.family != Family::free_group)
            throw invalid_input("window 'ball:R' only fits free groups");
        return free_ball(g.param, parse_int(spec.substr(5), "window radius"));
    }
    if (spec.rfind("set:", 0) == 0) return parse_set(g, spec.substr(4));
    throw invalid_input("window spec '" + spec + "' not recognized");
}

// "--p a,b,c", or "a,b" with the third exponent solved from conjugacy.
ExponentTriple parse_triple(const std::string& spec) {
    const auto toks = split_on(spec, ",");
    if (toks.size() == 2) {
        const double p1 = parse_double(toks[0], "exponent");
        const double p2 = parse_double(toks[1], "exponent");
        return ExponentTriple(p1, p2, third_exponent(p1, p2));
    }
    if (toks.size() != 3) throw invalid_input("--p needs two or three comma-separated exponents");
    return ExponentTriple(parse_double(toks[0], "exponent"), parse_double(toks[1], "exponent"),
                          parse_double(toks[2], "exponent"));
}

// ---------------------------------------------------------------- output

// Single-coordinate groups print scalars (matching the inline syntax); words
// and higher-dimensional points print as arrays.
Json element_out(const GroupDescriptor& g, const GroupElement& x) {
    if (g.family != Family::free_group && x.size() == 1) return Json::of(x[0]);
    return element_to_json(x);
}

Json subset_out(const FiniteSubset& a) {
    Json arr = Json::array();
    for (const auto& x : a.elements) arr.push(element_out(a.group, x));
    return arr;
}

void emit(const CliConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw invalid_input("cannot write to '" + cfg.out + "'");
    out << text << "\n";
}

void emit_records(const CliConfig& cfg, const std::vector<ExperimentRecord>& recs, bool wall_time,
                  bool single) {
    if (cfg.format == "csv") {
        std::string csv = records_to_csv(recs, wall_time);
        if (!csv.empty() && csv.back() == '\n') csv.pop_back(); // emit() adds the newline
        emit(cfg, csv);
    } else if (single && recs.size() == 1) {
        emit(cfg, record_to_json(recs[0], wall_time).dump());
    } else {
        emit(cfg, records_to_json(recs, wall_time));
    }
}

} // namespace

int main(int argc, char** argv) {
    CliConfig cfg;

    // The config file loads first so that environment variables, then command
    // line flags, can override it.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) load_config_file(cfg, argv[i + 1]);
            else if (arg.rfind("--config=", 0) == 0) load_config_file(cfg, arg.substr(9));
        }
        apply_env(cfg);
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"workbench for convolution-inequality experiments on discrete groups"};
    app.require_subcommand(1);
    std::string config_path; // consumed by the prescan above; registered so parsing accepts it
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--format", cfg.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out, "write output to a file instead of stdout");
    bool wall_time = false;
    app.add_flag("--wall-time", wall_time, "include wall_time in emitted records");

    std::string group_spec, f1_spec, f2_spec, f3_spec, f_spec, p_spec, window_spec;
    std::string set_a, set_b, t_grid_spec;
    std::vector<std::string> family_specs;
    double eta = 0.1, delta_max = 0.01, q_exp = 0.0, p_single = 0.0;
    double delta_hint = std::numeric_limits<double>::quiet_NaN();
    double gamma_flag = std::numeric_limits<double>::quiet_NaN();
    std::int64_t n_interval = 1, n_cyclic = 4, generator = 1;
    std::int64_t runs = 200, restarts = 16, max_iters = 200;
    std::uint64_t seed = 1;
    bool chain = false;

    CLI::App* c_ratio = app.add_subcommand("ratio", "trilinear form over the norm product");
    c_ratio->add_option("--group", group_spec)->required();
    c_ratio->add_option("--f1", f1_spec)->required();
    c_ratio->add_option("--f2", f2_spec)->required();
    c_ratio->add_option("--f3", f3_spec)->required();
    c_ratio->add_option("--p", p_spec)->required();

    CLI::App* c_decompose = app.add_subcommand("decompose", "dyadic layers and level selection");
    c_decompose->add_option("--group", group_spec)->required();
    c_decompose->add_option("--f", f_spec)->required();
    c_decompose->add_option("--p", p_single)->required();

    CLI::App* c_conc = app.add_subcommand("concentration", "minimal point count carrying the mass");
    c_conc->add_option("--group", group_spec)->required();
    c_conc->add_option("--f", f_spec)->required();
    c_conc->add_option("--eta", eta)->required();
    c_conc->add_option("--p", p_single)->required();

    CLI::App* c_reduce = app.add_subcommand("reduce", "power the triple onto exponents (s1,s2,1)");
    c_reduce->add_option("--group", group_spec)->required();
    c_reduce->add_option("--f1", f1_spec)->required();
    c_reduce->add_option("--f2", f2_spec)->required();
    c_reduce->add_option("--f3", f3_spec)->required();
    c_reduce->add_option("--p", p_spec)->required();

    CLI::App* c_partition = app.add_subcommand("partition", "split a family by norming alignment");
    c_partition->add_option("--group", group_spec)->required();
    c_partition->add_option("--f", family_specs, "family member (repeat)")->required();
    c_partition->add_option("--p", p_single)->required();
    c_partition->add_option("--delta", delta_hint, "deficit hint (default: measured)");
    c_partition->add_option("--gamma", gamma_flag, "convexity exponent (default: by p)");

    CLI::App* c_sumset = app.add_subcommand("sumset", "A+B with the torsion-free margin");
    c_sumset->add_option("--group", group_spec)->required();
    c_sumset->add_option("--A", set_a)->required();
    c_sumset->add_option("--B", set_b)->required();

    CLI::App* c_hy = app.add_subcommand("hy", "transform-side norms, ratio and chain gaps");
    c_hy->add_option("--group", group_spec)->required();
    c_hy->add_option("--f", f_spec)->required();
    c_hy->add_option("--p", p_single, "exponent for the ratio or chain");
    c_hy->add_option("--q", q_exp, "transform norm exponent (norm only)");
    c_hy->add_flag("--chain", chain, "report the squaring chain gaps (p <= 4/3)");

    CLI::App* c_ascend = app.add_subcommand("ascend", "alternating best-response maximization");
    c_ascend->add_option("--group", group_spec)->required();
    c_ascend->add_option("--f1", f1_spec)->required();
    c_ascend->add_option("--f2", f2_spec)->required();
    c_ascend->add_option("--f3", f3_spec)->required();
    c_ascend->add_option("--p", p_spec)->required();
    c_ascend->add_option("--window", window_spec);
    c_ascend->add_option("--max-iters", max_iters);

    CLI::App* c_curve = app.add_subcommand("curve", "best ratio along a concentration grid");
    c_curve->add_option("--group", group_spec)->required();
    c_curve->add_option("--p", p_spec)->required();
    c_curve->add_option("--t", t_grid_spec, "ascending t grid, e.g. 0.2,0.5,1.0")->required();
    c_curve->add_option("--window", window_spec);
    c_curve->add_option("--restarts", restarts);
    c_curve->add_option("--seed", seed);
    c_curve->add_option("--max-iters", max_iters);

    CLI::App* c_interval = app.add_subcommand("interval", "the box family on the integer line");
    c_interval->add_option("--N", n_interval)->required();
    c_interval->add_option("--p", p_spec);

    CLI::App* c_torsion = app.add_subcommand("torsion", "subgroup extremizer in a cyclic group");
    c_torsion->add_option("--n", n_cyclic)->required();
    c_torsion->add_option("--generator", generator)->required();
    c_torsion->add_option("--p", p_spec);
    c_torsion->add_option("--eta", eta);

    CLI::App* c_doubling = app.add_subcommand("doubling", "near-extremal population scan");
    c_doubling->add_option("--group", group_spec)->required();
    c_doubling->add_option("--p", p_spec)->required();
    c_doubling->add_option("--eta", eta);
    c_doubling->add_option("--delta-max", delta_max);
    c_doubling->add_option("--window", window_spec);
    c_doubling->add_option("--runs", runs);
    c_doubling->add_option("--seed", seed);
    c_doubling->add_option("--max-iters", max_iters);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 64;
    }

    try {
        validate_config(cfg);

        if (app.got_subcommand(c_ratio)) {
            const auto g = parse_group(group_spec);
            const double r = young_ratio(parse_function(g, f1_spec), parse_function(g, f2_spec),
                                         parse_function(g, f3_spec), parse_triple(p_spec),
                                         static_cast<std::size_t>(cfg.sumset_limit));
            emit(cfg, Json::object().add("ratio", Json::of(r)).dump());
        } else if (app.got_subcommand(c_decompose)) {
            const auto g = parse_group(group_spec);
            const RealFn f = parse_function(g, f_spec);
            const auto dec = layer_decompose(f);
            const auto sel = kappa_select(dec, p_single);
            Json layers = Json::array();
            for (const auto& layer : dec.layers)
                layers.push(Json::object()
                                .add("level", Json::of(layer.level))
                                .add("count", Json::of(layer.points.size()))
                                .add("profile", sparse_to_json(layer.profile)));
            const double r = default_lorentz_r(p_single);
            emit(cfg, Json::object()
                          .add("norm", Json::of(dec.source_norm(p_single)))
                          .add("kappa", Json::of(sel.kappa))
                          .add("score", Json::of(sel.score))
                          .add("rho_hat", Json::of(sel.rho_hat))
                          .add("lorentz_r", Json::of(r))
                          .add("lorentz_rearrangement",
                               Json::of(lorentz_norm(f, p_single, r, LorentzMethod::rearrangement)))
                          .add("lorentz_layer_proxy",
                               Json::of(lorentz_norm(f, p_single, r, LorentzMethod::layer_proxy)))
                          .add("layers", std::move(layers))
                          .dump());
        } else if (app.got_subcommand(c_conc)) {
            const auto g = parse_group(group_spec);
            const auto rep = concentration(parse_function(g, f_spec), eta, p_single);
            emit(cfg, Json::object()
                          .add("N", Json::of(rep.N))
                          .add("eta", Json::of(rep.eta))
                          .add("p", Json::of(rep.p))
                          .add("removed_mass_fraction", Json::of(rep.removed_mass_fraction))
                          .add("witness_set", subset_out(rep.witness_set))
                          .dump());
        } else if (app.got_subcommand(c_reduce)) {
            const auto g = parse_group(group_spec);
            const auto p = parse_triple(p_spec);
            const RealFn f1 = parse_function(g, f1_spec);
            const RealFn f2 = parse_function(g, f2_spec);
            const RealFn f3 = parse_function(g, f3_spec);
            const auto red = reduce_triple(f1, f2, f3, p);
            const double ratio =
                young_ratio(f1, f2, f3, p, static_cast<std::size_t>(cfg.sumset_limit));
            const double reduced = young_ratio_general(red.g1, red.g2, red.g3, red.s1, red.s2, 1.0,
                                                       static_cast<std::size_t>(cfg.sumset_limit));
            emit(cfg, Json::object()
                          .add("plan", Json::object()
                                           .add("q", Json::of(red.plan.q))
                                           .add("theta", Json::of(red.plan.theta))
                                           .add("phi", Json::of(red.plan.phi))
                                           .add("r1", Json::of(red.plan.r1))
                                           .add("r2", Json::of(red.plan.r2))
                                           .add("s1", Json::of(red.plan.s1))
                                           .add("s2", Json::of(red.plan.s2)))
                          .add("ratio", Json::of(ratio))
                          .add("ratio_power_p3", Json::of(std::pow(ratio, p.p3)))
                          .add("ratio_reduced", Json::of(reduced))
                          .add("g1", sparse_to_json(red.g1))
                          .add("g2", sparse_to_json(red.g2))
                          .add("g3", sparse_to_json(red.g3))
                          .dump());
        } else if (app.got_subcommand(c_partition)) {
            const auto g = parse_group(group_spec);
            std::vector<RealFn> family;
            family.reserve(family_specs.size());
            for (const auto& spec : family_specs) family.push_back(parse_function(g, spec));
            double gamma = gamma_flag;
            if (std::isnan(gamma)) {
                // config-level defaults; 0 means "derive from p"
                if (p_single >= 2.0) gamma = cfg.gamma_p_ge_2;
                else if (cfg.gamma_p_lt_2 > 0.0) gamma = cfg.gamma_p_lt_2;
            }
            const auto res = convexity_partition(family, p_single, delta_hint, gamma);
            Json s_prime = Json::array(), s_double = Json::array();
            for (auto i : res.s_prime) s_prime.push(Json::of(i));
            for (auto i : res.s_double_prime) s_double.push(Json::of(i));
            Json s_values = Json::array(), residuals = Json::array();
            for (std::size_t i = 0; i < family.size(); ++i) {
                s_values.push(Json::of(res.s_values.at(i)));
                residuals.push(Json::of(res.residual_norms.at(i)));
            }
            emit(cfg, Json::object()
                          .add("s_prime", std::move(s_prime))
                          .add("s_double_prime", std::move(s_double))
                          .add("s_values", std::move(s_values))
                          .add("residual_norms", std::move(residuals))
                          .add("eta", Json::of(res.eta_used))
                          .add("epsilon_delta", Json::of(res.epsilon_delta))
                          .add("delta", Json::of(res.delta_used))
                          .add("gamma", Json::of(res.gamma_used))
                          .add("F", sparse_to_json(res.F))
                          .dump());
        } else if (app.got_subcommand(c_sumset)) {
            const auto g = parse_group(group_spec);
            const auto A = parse_set(g, set_a);
            const auto B = parse_set(g, set_b);
            const auto S = sumset(A, B, static_cast<std::size_t>(cfg.sumset_limit));
            emit(cfg, Json::object()
                          .add("sumset", subset_out(S))
                          .add("kemperman_margin", Json::of(kemperman_margin(A, B)))
                          .dump());
        } else if (app.got_subcommand(c_hy)) {
            const auto g = parse_group(group_spec);
            const CplxFn f = parse_cfunction(g, f_spec);
            TorusQuadrature quad;
            quad.rel_tol = cfg.quadrature_tol;
            quad.max_points_per_axis = cfg.max_grid;
            quad.oversampling = cfg.oversampling;
            if (chain) {
                if (!(p_single > 0.0)) throw invalid_input("hy --chain needs --p");
                RealFn rf(g);
                for (const auto& [x, v] : f.values()) {
                    if (v.imag() != 0.0 || v.real() < 0.0)
                        throw invalid_input("hy --chain needs a nonnegative real function");
                    rf.set(x, v.real());
                }
                const auto gaps =
                    hy_chain_gaps(rf, p_single, quad, static_cast<std::size_t>(cfg.sumset_limit));
                emit(cfg, Json::object()
                              .add("gap1", Json::of(gaps.gap1))
                              .add("gap2", Json::of(gaps.gap2))
                              .add("s", Json::of(gaps.s))
                              .add("points_per_axis", Json::of(quad.points_per_axis))
                              .dump());
            } else if (q_exp > 0.0) {
                const double nrm = hy_norm(f, q_exp, quad);
                emit(cfg, Json::object()
                              .add("hy_norm", Json::of(nrm))
                              .add("q", Json::of(q_exp))
                              .add("points_per_axis", Json::of(quad.points_per_axis))
                              .dump());
            } else if (p_single > 0.0) {
                const auto r = hy_ratio(f, p_single, quad);
                emit(cfg, Json::object()
                              .add("ratio", Json::of(r.ratio))
                              .add("t", Json::of(r.t))
                              .add("p", Json::of(p_single))
                              .add("points_per_axis", Json::of(quad.points_per_axis))
                              .dump());
            } else {
                throw invalid_input("hy needs one of --p, --q or --chain");
            }
        } else if (app.got_subcommand(c_ascend)) {
            const auto g = parse_group(group_spec);
            const auto p = parse_triple(p_spec);
            SearchConfig scfg(parse_window(g, window_spec, cfg), p);
            scfg.max_iters = max_iters;
            scfg.convergence_tol = cfg.norm_rel_tol;
            const auto res = alternating_ascent(parse_function(g, f1_spec), parse_function(g, f2_spec),
                                                parse_function(g, f3_spec), scfg);
            Json history = Json::array();
            for (double r : res.ratio_history) history.push(Json::of(r));
            emit(cfg, Json::object()
                          .add("ratio", Json::of(res.ratio_history.back()))
                          .add("iterations_used", Json::of(res.iterations_used))
                          .add("ratio_history", std::move(history))
                          .add("f1", sparse_to_json(res.f1))
                          .add("f2", sparse_to_json(res.f2))
                          .add("f3", sparse_to_json(res.f3))
                          .dump());
        } else if (app.got_subcommand(c_curve)) {
            const auto g = parse_group(group_spec);
            const auto p = parse_triple(p_spec);
            SearchConfig scfg(parse_window(g, window_spec, cfg), p);
            scfg.max_iters = max_iters;
            scfg.convergence_tol = cfg.norm_rel_tol;
            scfg.seed = seed;
            std::vector<double> grid;
            for (const auto& tok : split_on(t_grid_spec, ","))
                grid.push_back(parse_double(tok, "t grid value"));
            emit_records(cfg, curve_scan(p, grid, scfg, restarts), wall_time, false);
        } else if (app.got_subcommand(c_interval)) {
            const auto p = p_spec.empty() ? ExponentTriple(1.5, 1.5, 1.5) : parse_triple(p_spec);
            emit_records(cfg, {interval_example(n_interval, p)}, wall_time, true);
        } else if (app.got_subcommand(c_torsion)) {
            const auto p = p_spec.empty() ? ExponentTriple(1.5, 1.5, 1.5) : parse_triple(p_spec);
            emit_records(cfg, {torsion_control(n_cyclic, generator, p, eta)}, wall_time, true);
        } else if (app.got_subcommand(c_doubling)) {
            const auto g = parse_group(group_spec);
            const auto p = parse_triple(p_spec);
            SearchConfig scfg(parse_window(g, window_spec, cfg), p);
            scfg.max_iters = max_iters;
            scfg.convergence_tol = cfg.norm_rel_tol;
            scfg.seed = seed;
            emit_records(cfg, doubling_scan(p, eta, delta_max, scfg, runs), wall_time, false);
        }
        return 0;
    } catch (const resource_limit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const degenerate_input& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
