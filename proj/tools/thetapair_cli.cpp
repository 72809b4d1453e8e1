// Batch front-end: expand thetas and mock preimages at cusps, enumerate
// groups, run the Bruinier-Funke pairing, and certify almost-universality.
// Exit codes: 0 success, 2 mathematical rejection, 1 usage/schema error.

#include "thetapair/pairing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace thetapair;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// serialization

json rational_pair(const Rational& r) { return json::array({to_string(num(r)), to_string(den(r))}); }

json qexp_to_json(const QExpansion& f)
{
    Int d(1);
    for (const auto& [e, c] : f.terms()) { (void)c; d = lcm(d, den(e)); }
    json terms = json::array();
    for (const auto& [e, c] : f.terms())
        terms.push_back(json::array({to_string(num(e)), to_string(den(e)), c.to_string()}));
    return json{{"width", to_string(f.width())},
                {"denominator", to_string(d)},
                {"terms", terms},
                {"bound", to_string(f.bound())}};
}

QExpansion qexp_from_json(const json& j)
{
    QExpansion f(parse_rational(j.at("bound").get<std::string>()),
                 parse_rational(j.at("width").get<std::string>()));
    for (const auto& t : j.at("terms")) {
        Rational e = parse_rational(t.at(0).get<std::string>()) /
                     parse_rational(t.at(1).get<std::string>());
        f.add_term(e, Cyclo::parse(t.at(2).get<std::string>()));
    }
    return f;
}

json word_to_json(const STWord& w)
{
    json out = json::array();
    for (const auto& [t, m] : w.tokens)
        out.push_back(t == 'S' ? json::array({"S"}) : json::array({"T", m}));
    return out;
}

std::string cusp_label(const Cusp& c)
{
    return std::to_string(c.a) + "/" + std::to_string(c.c);
}

std::string group_label(long long m0, long long m1)
{
    std::string s = "Gamma0(" + std::to_string(m0) + ")";
    if (m1 > 1) s += " cap Gamma1(" + std::to_string(m1) + ")";
    return s;
}

void emit(const json& report, const std::string& output)
{
    std::string text = report.dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open output file " + output);
    out << text;
}

// ---------------------------------------------------------------------------
// expansion cache: one JSON file per request, content-addressed, written
// atomically so concurrent runs are safe

std::string fnv1a(const std::string& s)
{
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream o;
    o << std::hex << h;
    return o.str();
}

struct Cache {
    fs::path dir;   // empty = disabled

    std::optional<json> load(const std::string& key) const
    {
        if (dir.empty()) return std::nullopt;
        std::ifstream in(dir / (fnv1a(key) + ".json"));
        if (!in) return std::nullopt;
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || j.value("key", "") != key) return std::nullopt;
        return j;
    }

    void store(const std::string& key, json j) const
    {
        if (dir.empty()) return;
        fs::create_directories(dir);
        j["key"] = key;
        fs::path final = dir / (fnv1a(key) + ".json");
        fs::path tmp = final;
        tmp += ".tmp" + std::to_string(::getpid());
        std::ofstream out(tmp);
        out << j.dump();
        out.close();
        fs::rename(tmp, final);
    }
};

MockExpander cached_mock_expander(const Cache& cache)
{
    return [cache](const MockSpec& spec, const Rational& delta, const CuspData& cusp,
                   const Rational& bound) {
        std::string key = "mock|" + std::to_string(spec.h) + "|" + std::to_string(spec.t) + "|" +
                          std::to_string(spec.N) + "|" + to_string(delta) + "|" +
                          cusp.scaling.to_string() + "|" + to_string(bound);
        if (auto hit = cache.load(key)) {
            HarmonicExpansion h;
            h.holo = qexp_from_json(hit->at("holo"));
            for (const auto& t : hit->at("nonholo")) {
                NonholoTerm term;
                term.exponent = parse_rational(t.at(0).get<std::string>());
                term.coeff = Cyclo::parse(t.at(1).get<std::string>());
                term.envelope = parse_rational(t.at(2).get<std::string>());
                h.nonholo_labels.push_back(std::move(term));
            }
            return h;
        }
        HarmonicExpansion h = holo_part_at_cusp(spec, delta, cusp, bound);
        json labels = json::array();
        for (const auto& t : h.nonholo_labels)
            labels.push_back(json::array(
                {to_string(t.exponent), t.coeff.to_string(), to_string(t.envelope)}));
        cache.store(key, json{{"holo", qexp_to_json(h.holo)}, {"nonholo", labels}});
        return h;
    };
}

// ---------------------------------------------------------------------------
// shared input plumbing

Cusp parse_cusp(const std::string& s)
{
    if (s == "inf" || s == "oo") return Cusp::of(1, 0);
    auto slash = s.find('/');
    long long a = std::stoll(s.substr(0, slash));
    long long c = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
    return Cusp::of(a, c);
}

json read_input(const std::string& path)
{
    if (path.empty() || path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file " + path);
    return json::parse(in);
}

// {gram, shift} or {polygonal: {m, a, b, c}}
std::pair<ShiftedLattice, long long> lattice_from_json(const json& j)
{
    if (j.contains("polygonal")) {
        const json& p = j.at("polygonal");
        PolygonalLattice pl = polygonal_to_lattice(p.at("m").get<long long>(),
                                                   p.at("a").get<long long>(),
                                                   p.at("b").get<long long>(),
                                                   p.at("c").get<long long>());
        long long N = pl.class_modulus % 2 == 0 ? pl.class_modulus / 2 : pl.class_modulus;
        return {pl.lattice, N};
    }
    ShiftedLattice lat;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) lat.gram[i][k] = j.at("gram").at(i).at(k).get<long long>();
    for (int i = 0; i < 3; ++i) lat.shift[i] = parse_rational(j.at("shift").at(i).get<std::string>());
    lat.validate();
    long long N = 1;
    for (int i = 0; i < 3; ++i) N = std::lcm(N, to_long(den(lat.shift[i])));
    return {lat, N};
}

json pairing_report_json(const PairingReport& r)
{
    json terms = json::array();
    for (const auto& pc : r.per_cusp) {
        if (pc.contribution.is_zero()) continue;
        json tl = json::array();
        for (const auto& t : pc.terms)
            tl.push_back(json{{"n", rational_pair(t.n)},
                              {"c_f", t.cf.to_string()},
                              {"c_H", t.ch.to_string()}});
        terms.push_back(json{{"cusp", cusp_label(pc.cusp.cusp)},
                             {"width", pc.cusp.width},
                             {"contribution", pc.contribution.to_string()},
                             {"terms", tl}});
    }
    return json{{"label", r.label},
                {"index", r.index},
                {"contains_minus_id", r.contains_minus_id},
                {"total", r.total.to_string()},
                {"is_zero", r.is_zero},
                {"nonzero_cusps", terms}};
}

json orthogonality_json(const OrthogonalityReport& rep, const CongruenceGroup& group,
                        const std::string& glabel)
{
    json cusps = json::array();
    for (const auto& c : group.cusps()) cusps.push_back(cusp_label(c.cusp));
    json totals = json::object();
    json reports = json::array();
    for (const auto& r : rep.reports) {
        totals[r.label] = r.total.to_string();
        reports.push_back(pairing_report_json(r));
    }
    return json{{"group", glabel},      {"index", group.index()}, {"cusps", cusps},
                {"totals", totals},     {"orthogonal", rep.orthogonal},
                {"reports", reports}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact Petersson products of ternary theta series against unary thetas"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");   // keep --h free for the unary class

    std::string output, input_path, cusp_str = "1/0", cache_dir;
    if (const char* env = std::getenv("THETAPAIR_CACHE")) cache_dir = env;
    std::string bound_str = "12", delta_str = "1";
    long long g0 = 0, g1 = 1;
    long long H = 2, T = 1, N = 3;
    long long pm = 8, pa = 1, pb = 3, pc3 = 3;
    long long ma = 1, mb = 0, mc = 0, md = 1;
    bool no_filter = false, self = false;
    app.add_option("--json,-o", output, "write the JSON report to a file (default stdout)");
    app.add_option("--cache-dir", cache_dir, "expansion cache directory (env THETAPAIR_CACHE)");
    app.fallthrough();

    auto* cmd_theta = app.add_subcommand("theta-expand", "expand a shifted ternary theta at a cusp");
    cmd_theta->set_help_flag("--help", "print help");
    cmd_theta->add_option("--input,-i", input_path, "lattice JSON ({gram, shift} or {polygonal})");
    cmd_theta->add_option("--cusp", cusp_str, "cusp a/c (default infinity)");
    cmd_theta->add_option("--bound", bound_str, "exponent bound (rational)");
    cmd_theta->add_option("--delta", delta_str, "rescale tau -> delta tau");

    auto* cmd_mock = app.add_subcommand("mock-expand", "holomorphic part of a preimage at a cusp");
    cmd_mock->set_help_flag("--help", "print help");
    cmd_mock->add_option("--h", H, "unary class");
    cmd_mock->add_option("--t", T, "squarefree divisor of 2N");
    cmd_mock->add_option("--N", N, "level parameter");
    cmd_mock->add_option("--cusp", cusp_str, "cusp a/c (default infinity)");
    cmd_mock->add_option("--bound", bound_str, "exponent bound (rational)");
    cmd_mock->add_option("--delta", delta_str, "rescale tau -> delta tau");

    auto* cmd_cusps = app.add_subcommand("cusps", "cusp data of Gamma0(M0) cap Gamma1(M1)");
    cmd_cusps->set_help_flag("--help", "print help");
    cmd_cusps->add_option("--gamma0", g0, "Gamma0 modulus")->required();
    cmd_cusps->add_option("--gamma1", g1, "Gamma1 modulus");

    auto* cmd_dec = app.add_subcommand("decompose", "S/T word of an SL2(Z) matrix");
    cmd_dec->set_help_flag("--help", "print help");
    cmd_dec->add_option("a", ma)->required();
    cmd_dec->add_option("b", mb)->required();
    cmd_dec->add_option("c", mc)->required();
    cmd_dec->add_option("d", md)->required();

    auto* cmd_pair = app.add_subcommand("pair", "Bruinier-Funke pairing against one unary candidate");
    cmd_pair->set_help_flag("--help", "print help");
    cmd_pair->add_option("--h", H, "unary class");
    cmd_pair->add_option("--t", T, "squarefree divisor of 2N");
    cmd_pair->add_option("--N", N, "level parameter");
    cmd_pair->add_option("--input,-i", input_path, "lattice JSON for f (omit with --self)");
    cmd_pair->add_flag("--self", self, "pair the unary theta against its own preimage");
    cmd_pair->add_option("--group0", g0, "override group: Gamma0 modulus");
    cmd_pair->add_option("--group1", g1, "override group: Gamma1 modulus");
    cmd_pair->add_option("--delta", delta_str, "rescale tau -> delta tau");

    auto* cmd_au = app.add_subcommand("almost-universal",
                                      "orthogonality certificate for a p_m(x)+b p_m(y)+c p_m(z)");
    cmd_au->set_help_flag("--help", "print help");
    cmd_au->add_option("--m", pm, "polygonal order")->required();
    cmd_au->add_option("--a", pa)->required();
    cmd_au->add_option("--b", pb)->required();
    cmd_au->add_option("--c", pc3)->required();
    cmd_au->add_option("--group0", g0, "override group: Gamma0 modulus");
    cmd_au->add_option("--group1", g1, "override group: Gamma1 modulus");
    cmd_au->add_flag("--no-filter", no_filter,
                     "pair against every candidate (default; no congruence pre-filter exists)");

    auto* cmd_xi = app.add_subcommand("xi-check", "numerical xi-image validation of a preimage");
    cmd_xi->set_help_flag("--help", "print help");
    cmd_xi->add_option("--h", H, "unary class");
    cmd_xi->add_option("--t", T, "squarefree divisor of 2N");
    cmd_xi->add_option("--N", N, "level parameter");
    std::string step_str = "1/10000";
    cmd_xi->add_option("--step", step_str, "finite-difference step (rational)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Cache cache{cache_dir.empty() ? fs::path() : fs::path(cache_dir)};
        Rational bound = parse_rational(bound_str);
        Rational delta = parse_rational(delta_str);

        if (*cmd_theta) {
            auto [lat, dummyN] = lattice_from_json(read_input(input_path));
            (void)dummyN;
            DiagonalCosetTheta theta = DiagonalCosetTheta::make(lat, delta, true);
            Cusp cusp = parse_cusp(cusp_str);
            SL2 gamma = cusp_to_matrix(cusp);
            emit(json{{"cusp", cusp_label(cusp)}, {"expansion", qexp_to_json(theta.at_cusp(gamma, bound))}},
                 output);
        } else if (*cmd_mock) {
            MockSpec spec{H, T, N};
            spec.validate();
            Cusp cusp = parse_cusp(cusp_str);
            CuspData data{cusp, cusp_to_matrix(cusp), 1, true};
            HarmonicExpansion h = cached_mock_expander(cache)(spec, delta, data, bound);
            json labels = json::array();
            for (const auto& t : h.nonholo_labels)
                labels.push_back(json{{"exponent", rational_pair(t.exponent)},
                                      {"coefficient", t.coeff.to_string()},
                                      {"envelope", rational_pair(t.envelope)}});
            emit(json{{"spec", spec.shadow().label()},
                      {"cusp", cusp_label(cusp)},
                      {"holo", qexp_to_json(h.holo)},
                      {"nonholo_labels", labels}},
                 output);
        } else if (*cmd_cusps) {
            CongruenceGroup group(g0, g1);
            json cusps = json::array();
            for (const auto& c : group.cusps())
                cusps.push_back(json{{"cusp", cusp_label(c.cusp)},
                                     {"width", c.width},
                                     {"regular", c.regular},
                                     {"word", word_to_json(decompose_st(c.scaling))}});
            emit(json{{"group", group_label(g0, g1)},
                      {"index", group.index()},
                      {"contains_minus_id", group.contains_minus_id()},
                      {"cusps", cusps}},
                 output);
        } else if (*cmd_dec) {
            SL2 g{ma, mb, mc, md};
            STWord w = decompose_st(g);
            if (!(w.evaluate() == g)) throw std::logic_error("decompose self-check failed");
            emit(json{{"matrix", json::array({ma, mb, mc, md})},
                      {"word", word_to_json(w)},
                      {"length", w.generator_count()},
                      {"self_check", true}},
                 output);
        } else if (*cmd_pair) {
            UnaryThetaSpec u{H, T, N};
            u.validate();
            CuspExpander f;
            CongruenceGroup group = g0 ? CongruenceGroup(g0, g1) : pairing_group(N);
            if (self) {
                f = [&](const SL2& g, const Rational& b) {
                    return unary_theta_at_cusp(u, delta, g, b);
                };
            } else {
                auto [lat, latN] = lattice_from_json(read_input(input_path));
                (void)latN;
                DiagonalCosetTheta theta = DiagonalCosetTheta::make(lat, Rational(1), true);
                if (!g0) group = pairing_group(N, lat);
                f = [theta](const SL2& g, const Rational& b) { return theta.at_cusp(g, b); };
            }
            PairingReport r =
                bf_pair(f, MockSpec{u.h, u.t, u.N}, delta, group, cached_mock_expander(cache));
            json j = pairing_report_json(r);
            j["group"] = group_label(group.gamma0_level(), group.gamma1_level());
            emit(j, output);
        } else if (*cmd_au) {
            (void)no_filter;   // pairing against every candidate is the only mode
            PolygonalLattice pl = polygonal_to_lattice(pm, pa, pb, pc3);
            long long auN = pl.class_modulus % 2 == 0 ? pl.class_modulus / 2 : pl.class_modulus;
            CongruenceGroup group = g0 ? CongruenceGroup(g0, g1) : pairing_group(auN, pl.lattice);
            CongruenceGroup* override_ptr = g0 ? &group : nullptr;
            OrthogonalityReport rep =
                orthogonality_report(pm, pa, pb, pc3, override_ptr, cached_mock_expander(cache));
            emit(orthogonality_json(rep, group,
                                    group_label(group.gamma0_level(), group.gamma1_level())),
                 output);
        } else if (*cmd_xi) {
            MockSpec spec{H, T, N};
            spec.validate();
            double step = to_double(parse_rational(step_str));
            UnaryThetaSpec shadow{H, T, N};
            QExpansion th = theta_expansion_infty(shadow, Rational(200));
            std::vector<std::complex<double>> samples = {{0.0, 1.0}, {1.0 / 3.0, 1.0}, {0.0, 2.0}};
            double max_err = 0.0;
            json pts = json::array();
            for (auto tau : samples) {
                std::complex<double> xi = xi_image_numeric(spec, Rational(1), tau, step);
                std::complex<double> want = th.eval(tau);
                double err = std::abs(xi - want);
                max_err = std::max(max_err, err);
                pts.push_back(json{{"tau", {tau.real(), tau.imag()}}, {"error", err}});
            }
            // rescaled variant: xi of F(tau/4) equals (1/2) theta(tau/4) by the
            // chain rule (factor delta^{1/2})
            double rescale_err = 0.0;
            for (auto tau : samples) {
                std::complex<double> xi = xi_image_numeric(spec, Rational(1, 4), tau, step);
                std::complex<double> want = 0.5 * th.eval(tau / 4.0);
                rescale_err = std::max(rescale_err, std::abs(xi - want));
            }
            emit(json{{"spec", shadow.label()},
                      {"samples", pts},
                      {"max_error", max_err},
                      {"rescale_constant", "1/2"},
                      {"rescaled_max_error", rescale_err}},
                 output);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
