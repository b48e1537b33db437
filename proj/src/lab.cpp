#include "heislab/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>

#include "heislab/beta.hpp"
#include "heislab/corona.hpp"
#include "heislab/errors.hpp"
#include "heislab/flags.hpp"
#include "heislab/heis.hpp"
#include "heislab/ilg.hpp"
#include "heislab/kernels.hpp"
#include "heislab/sio.hpp"
#include "heislab/tame.hpp"

namespace heislab {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

template <class T>
T param(const json& p, const char* key, T fallback) {
    if (!p.contains(key)) return fallback;
    try {
        return p.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("parameter '{}': {}", key, e.what()));
    }
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ResourceError("cannot write " + path.string());
    return os;
}

Check check_le(std::string name, double value, double limit) {
    return {std::move(name), value, limit, std::isfinite(value) && value <= limit};
}

std::string fmt_num(double v) { return fmt::format("{:.12g}", v); }

using Suite = std::function<void(const ExperimentConfig&, SuiteResult&)>;

void geom_selftest(const ExperimentConfig& cfg, SuiteResult& res) {
    const int samples = param(cfg.params, "samples", 1000);
    const auto a = group_audit(samples, cfg.seed);
    res.checks.push_back(check_le("associativity", a.associativity, 1e-12));
    res.checks.push_back(check_le("inverse", a.inverse, 1e-12));
    res.checks.push_back(check_le("dilation", a.dilation, 1e-12));
    res.checks.push_back(check_le("left_invariance", a.left_invariance, 1e-12));
    res.checks.push_back({"koranyi_ratio_min", a.koranyi_ratio_min, 1.0, a.koranyi_ratio_min >= 1.0 - 1e-12});
    res.checks.push_back(check_le("koranyi_ratio_max", a.koranyi_ratio_max, std::pow(17.0, 0.25)));
    auto path = cfg.out / "geom-selftest.csv";
    auto os = open_csv(path);
    os << "check,samples,value,limit,pass\n";
    for (const auto& c : res.checks)
        os << fmt::format("{},{},{},{},{}\n", c.name, samples, fmt_num(c.value), fmt_num(c.limit), c.pass ? 1 : 0);
    res.files.push_back(path);
}

void kernels_check(const ExperimentConfig& cfg, SuiteResult& res) {
    const auto names = param<std::vector<std::string>>(
        cfg.params, "kernels", {"RieszX", "RieszY", "RieszT", "GradLogX", "GradLogY", "ChousionisLi(4)"});
    const int samples = param(cfg.params, "samples", 10000);
    const int triples = param(cfg.params, "triples", 2000);
    const auto tri = sk_triples(triples, cfg.seed);
    auto path = cfg.out / "kernels-check.csv";
    auto os = open_csv(path);
    os << "kernel,odd_violation,hodd_violation,size_constant,holder_constant\n";
    for (const auto& n : names) {
        KernelSpec spec;
        try {
            spec = KernelSpec::parse(n);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        const auto s = symmetry_check(spec, samples, cfg.seed);
        const auto k = sk_constants(spec, tri, 0.5);
        os << fmt::format("{},{},{},{},{}\n", spec.name(), fmt_num(s.odd_violation), fmt_num(s.hodd_violation),
                          fmt_num(k.size_constant), fmt_num(k.holder_constant));
        if (spec.tag == KernelTag::ChousionisLi) {
            // Non-negative kernel: the property to check is vanishing on {t = 0}.
            auto rng = make_rng(cfg.seed, 13);
            double plane = 0.0;
            for (int i = 0; i < samples; ++i) {
                HPoint p = random_point(rng, 1e-3, 1e3);
                p.t = 0.0;
                if (p.x == 0.0 && p.y == 0.0) continue;
                plane = std::max(plane, std::abs(eval_kernel(spec, p)));
            }
            res.checks.push_back(check_le(spec.name() + ".zero_on_plane", plane, 0.0));
        } else {
            res.checks.push_back(check_le(spec.name() + ".symmetry", s.max_violation, 1e-10));
        }
        res.checks.push_back(check_le(spec.name() + ".size_constant", k.size_constant, 1e12));
    }
    res.files.push_back(path);
}

void tame_extend(const ExperimentConfig& cfg, SuiteResult& res) {
    const int trials = param(cfg.params, "trials", 100);
    const auto max_points = param<std::size_t>(cfg.params, "max_points", 20);
    const double L_max = param(cfg.params, "L", 2.0);
    const auto n = param<std::size_t>(cfg.params, "grid", 513);
    const auto g = UniformGrid::over(0.0, 1.0, n);
    auto rng = make_rng(cfg.seed, 71);
    auto path = cfg.out / "tame-extend.csv";
    auto os = open_csv(path);
    os << "trial,points,L,measured,ratio,agree_error\n";
    double worst = 0.0, agree = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto d = random_partial_tame(rng, g, max_points, L_max);
        const auto ext = extend_tame(d, g);
        const double L = tameness_constant(d);
        const double m = tameness_constant(ext);
        double err = 0.0;
        for (std::size_t k = 0; k < d.points.size(); ++k) {
            const std::size_t i = g.nearest(d.points[k]);
            err = std::max({err, std::abs(ext.b1()[i] - d.phi1[k]), std::abs(ext.b2()[i] - d.phi2[k])});
        }
        const double ratio = L > 0.0 ? m / L : 0.0;
        worst = std::max(worst, ratio);
        agree = std::max(agree, err);
        os << fmt::format("{},{},{},{},{},{}\n", t, d.points.size(), fmt_num(L), fmt_num(m), fmt_num(ratio),
                          fmt_num(err));
    }
    res.checks.push_back(check_le("tameness_ratio", worst, 18.0));
    res.checks.push_back(check_le("agreement_on_E", agree, 0.0));
    res.files.push_back(path);
}

void corona_suite(const ExperimentConfig& cfg, SuiteResult& res) {
    const auto mode = param<std::string>(cfg.params, "mode", "lipschitz");
    if (mode != "lipschitz" && mode != "tame") throw ConfigError("corona mode must be 'lipschitz' or 'tame'");
    const auto fixtures = param<std::vector<std::string>>(cfg.params, "fixtures", {"slope", "zigzag", "wave"});
    const auto etas = param<std::vector<double>>(cfg.params, "etas", {0.5, 0.25});
    const int depth = param(cfg.params, "depth", 8);
    const double L = param(cfg.params, "L", 1.0);
    if (depth < 1 || depth > 16) throw ConfigError("corona depth must lie in [1, 16]");
    const std::size_t n = (std::size_t{1} << (depth + 2)) + 1;
    auto path = cfg.out / "corona.csv";
    auto os = open_csv(path);
    os << "mode,fixture,eta,depth,bad,trees,bad_carleson,top_carleson,max_approx_ratio,ok\n";
    for (const auto& name : fixtures) {
        IlgFunction f;
        try {
            f = ilg_fixture(name, L, 0.0, 1.0, n);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        for (double eta : etas) {
            CoronaDecomposition dec;
            CoronaAudit au;
            if (mode == "lipschitz") {
                dec = lipschitz_corona(f.phi1, eta, depth);
                au = audit_corona(dec, f.phi1);
            } else {
                const auto raw = TameMapSampled::from_b1(f.phi1.grid, f.phi1.v, 0.0);
                const auto B = TameMapSampled::from_b1(f.phi1.grid, f.phi1.v, 0.0,
                                                       std::max(1.0, tameness_constant(raw)));
                dec = tame_corona(B, eta, depth);
                au = audit_corona(dec, B);
            }
            os << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", mode, name, fmt_num(eta), depth, dec.bad.size(),
                              dec.trees.size(), fmt_num(au.bad_carleson), fmt_num(au.top_carleson),
                              fmt_num(au.max_approx_ratio), au.ok() ? 1 : 0);
            res.checks.push_back({fmt::format("{}.{}.audit", name, eta), au.ok() ? 1.0 : 0.0, 1.0, au.ok()});
        }
    }
    res.files.push_back(path);
}

void sio_sweep(const ExperimentConfig& cfg, SuiteResult& res) {
    const auto kernel = param<std::string>(cfg.params, "kernel", "Hilbert");
    const auto n = param<std::size_t>(cfg.params, "n", 1024);
    auto eps = param<std::vector<double>>(cfg.params, "epsilons", {0.125, 0.0625, 0.03125});
    const double a = param(cfg.params, "a", 0.0), b = param(cfg.params, "b", 4.0);
    if (eps.empty() || n < 2 || !(b > a)) throw ConfigError("sio-norm-sweep needs epsilons, n >= 2 and a < b");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    std::vector<NormRow> rows;
    using clock = std::chrono::steady_clock;
    if (kernel == "Hilbert" || kernel == "Control") {
        const auto s = LineSamples::midpoint(a, b, n);
        const auto k = kernel == "Hilbert" ? hilbert_kernel() : positive_control_kernel();
        for (double e : eps) {
            const auto t0 = clock::now();
            const auto m = assemble_sio(k, s, e);
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            rows.push_back({kernel, "line", e, n, op_norm(m), secs});
        }
    } else {
        KernelSpec spec;
        try {
            spec = KernelSpec::parse(kernel);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        const auto curve_name = param<std::string>(cfg.params, "curve", "wave");
        const double L = param(cfg.params, "L", 1.0);
        IlgFunction f;
        try {
            f = ilg_fixture(curve_name, L, a, b, 4 * n + 1);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        const auto c = curve_from_graph(f, a, b, n);
        const auto k = make_pair_kernel(spec);
        for (double e : eps) {
            const auto t0 = clock::now();
            const auto m = assemble_sio(k, c, e);
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            rows.push_back({spec.name(), curve_name, e, n, op_norm(m), secs});
        }
    }
    for (const auto& r : rows) res.checks.push_back(check_le(fmt::format("op_norm@{}", r.epsilon), r.op_norm, 1e6));
    auto path = cfg.out / "sio-norm-sweep.csv";
    auto os = open_csv(path);
    write_norm_csv(os, rows, cfg.timing);
    res.files.push_back(path);
}

Curve beta_curve(const json& p) {
    const auto name = param<std::string>(p, "curve", "wave");
    const auto n = param<std::size_t>(p, "n", 1024);
    if (name == "horizontal_line") return horizontal_line_curve({}, param(p, "theta", 0.0), 0.0, 1.0, n);
    if (name == "t_axis") return t_axis_curve(0.0, 1.0, n);
    try {
        return curve_from_graph(ilg_fixture(name, param(p, "L", 1.0), 0.0, 1.0, 4 * n + 1), 0.0, 1.0, n);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

void beta_carleson(const ExperimentConfig& cfg, SuiteResult& res) {
    const auto c = beta_curve(cfg.params);
    const int depth = param(cfg.params, "depth", 5);
    const double eps = param(cfg.params, "eps", 0.1);
    const double cfrac = param(cfg.params, "cfrac", 0.5);
    const auto sys = dyadic_cubes_on_curve(c, depth, true, cfg.seed);
    std::vector<CubeRow> rows;
    std::vector<std::vector<double>> beta(sys.levels.size());
    for (std::size_t j = 0; j < sys.levels.size(); ++j) {
        const auto& lev = sys.levels[j];
        std::vector<GoodCubeReport> rep(lev.size());
        for (std::size_t k = 0; k < lev.size(); ++k)
            rep[k] = good_cube_classify(c, lev[k], HorizontalSubgroup(), cfrac, eps);
        for (std::size_t k = 0; k < lev.size(); ++k) {
            rows.push_back({lev[k].level, lev[k].index, lev[k].center, rep[k].beta, rep[k].proj_ratio, rep[k].good});
            beta[j].push_back(rep[k].beta);
        }
    }
    auto path = cfg.out / "beta-carleson.csv";
    auto os = open_csv(path);
    write_cube_csv(os, rows);
    res.files.push_back(path);

    // Packing sums over descendants of each cube, from the betas above.
    auto wpath = cfg.out / "beta-carleson-wgl.csv";
    auto ws = open_csv(wpath);
    ws << "level,index,wgl_sum\n";
    double worst = 0.0;
    for (std::size_t j0 = 0; j0 < beta.size(); ++j0)
        for (std::size_t k0 = 0; k0 < beta[j0].size(); ++k0) {
            double s = 0.0;
            for (std::size_t j = j0; j < beta.size(); ++j) {
                const std::size_t span = std::size_t{1} << (j - j0);
                for (std::size_t k = k0 * span; k < (k0 + 1) * span; ++k)
                    if (beta[j][k] > eps) s += std::ldexp(1.0, -static_cast<int>(j - j0));
            }
            worst = std::max(worst, s);
            ws << fmt::format("{},{},{}\n", j0, k0, fmt_num(s));
        }
    res.files.push_back(wpath);
    res.checks.push_back(check_le("wgl_max", worst, static_cast<double>(depth + 1)));
    res.checks.push_back(check_le("regularity", sys.regularity, 10.0));
}

FlagSpec flag_profile(const json& p) {
    const auto name = param<std::string>(p, "profile", "flat");
    const auto w = param<std::vector<double>>(p, "window", {-1.0, 1.0, -1.0 / 32.0, 1.0 / 32.0});
    if (w.size() != 4 || !(w[1] > w[0]) || !(w[3] > w[2])) throw ConfigError("flag window must be [y0, y1, t0, t1]");
    if (w[0] > 0.0 || w[1] < 0.0) throw ConfigError("flag window must contain y = 0");
    std::function<double(double)> A;
    if (name == "flat")
        A = [](double) { return 0.0; };
    else if (name == "linear")
        A = [](double y) { return y; };
    else if (name == "abs")
        A = [](double y) { return std::abs(y); };
    else if (name == "wave")
        A = [](double y) { return std::sin(2.0 * std::numbers::pi * y) / (2.0 * std::numbers::pi); };
    else
        throw ConfigError("unknown flag profile '" + name + "'");
    return FlagSpec::from(A, w[0], w[1], w[2], w[3]);
}

void flags_norm(const ExperimentConfig& cfg, SuiteResult& res) {
    const auto f = flag_profile(cfg.params);
    const auto profile = param<std::string>(cfg.params, "profile", "flat");
    const auto kname = param<std::string>(cfg.params, "kernel", "GradKorY");
    const auto ny = param<std::size_t>(cfg.params, "ny", 32), nt = param<std::size_t>(cfg.params, "nt", 32);
    auto eps = param<std::vector<double>>(cfg.params, "epsilons", {0.25, 0.125});
    std::sort(eps.begin(), eps.end(), std::greater<>());
    Kernel3 K;
    try {
        K = flag_kernel(kname);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    std::vector<FlagNormRow> rows;
    for (double e : eps) rows.push_back({kname, profile, e, ny, nt, sio3_norm(f, K, ny, nt, e)});
    const auto bl = flag_bilipschitz_audit(f, param(cfg.params, "pairs", 2000), cfg.seed);
    res.checks.push_back({"bilipschitz_min", bl.ratios.min, 0.25, bl.ratios.min >= 0.25});
    res.checks.push_back(check_le("bilipschitz_max", bl.ratios.max, 4.0));
    auto path = cfg.out / "flags-norm.csv";
    auto os = open_csv(path);
    write_flag_csv(os, rows);
    res.files.push_back(path);
}

const std::map<std::string, Suite>& suites() {
    static const std::map<std::string, Suite> m{
        {"geom-selftest", geom_selftest}, {"kernels-check", kernels_check}, {"tame-extend", tame_extend},
        {"corona", corona_suite},         {"sio-norm-sweep", sio_sweep},    {"beta-carleson", beta_carleson},
        {"flags-norm", flags_norm},
    };
    return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : suites()) v.push_back(k);
        return v;
    }();
    return names;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::optional<std::string>& suite) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.suite = suite ? *suite : param<std::string>(j, "suite", "");
    if (!suites().contains(c.suite)) throw ConfigError("unknown suite '" + c.suite + "'");
    c.seed = param<std::uint64_t>(j, "seed", 1);
    c.threads = param<unsigned>(j, "threads", 0);
    c.timing = param(j, "timing", false);
    c.out = param<std::string>(j, "out", "heislab_out");
    if (j.contains(c.suite)) {
        c.params = j.at(c.suite);
        if (!c.params.is_object()) throw ConfigError("parameters for '" + c.suite + "' must be an object");
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file, const std::optional<std::string>& suite) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot open config " + file.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config {}: {}", file.string(), e.what()));
    }
    return from_json(j, suite);
}

bool SuiteResult::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

SuiteResult run(const ExperimentConfig& cfg) {
    const auto it = suites().find(cfg.suite);
    if (it == suites().end()) throw ConfigError("unknown suite '" + cfg.suite + "'");
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw ResourceError(fmt::format("cannot create {}: {}", cfg.out.string(), ec.message()));
    set_threads(cfg.threads);
    SuiteResult res;
    const auto t0 = std::chrono::steady_clock::now();
    it->second(cfg, res);
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json m;
    m["suite"] = cfg.suite;
    m["seed"] = cfg.seed;
    m["threads"] = threads();
    m["versions"] = {{"heislab", kVersion},
                     {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION},
                     {"fmt", FMT_VERSION}};
    m["wall_time"] = res.wall_time;
    m["params"] = cfg.params;
    json files = json::array();
    for (const auto& f : res.files) files.push_back(f.filename().string());
    m["files"] = files;
    json checks = json::array();
    for (const auto& c : res.checks) checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    m["checks"] = checks;
    auto path = cfg.out / "manifest.json";
    std::ofstream os(path);
    if (!os) throw ResourceError("cannot write " + path.string());
    os << m.dump(2) << '\n';
    res.files.push_back(path);
    return res;
}

}  // namespace heislab
