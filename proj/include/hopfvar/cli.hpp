#pragma once

#include <CLI11.hpp>

#include "hopfvar/verify.hpp"

namespace hopfvar {

inline constexpr const char* kVersion = "hopfvar 0.1.0";

namespace cli_detail {

inline cplx parse_complex(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    auto bad = [&]() -> cplx {
        throw std::invalid_argument("cannot parse complex number '" + s + "'");
    };
    if (*p == 'i') return (p[1] == '\0') ? cplx(0, 1) : bad();
    double first = std::strtod(p, &end);
    if (end == p) return bad();
    if (*end == 'i') return (end[1] == '\0') ? cplx(0, first) : bad();
    if (*end == '\0') return cplx(first, 0);
    if (*end != '+' && *end != '-') return bad();
    const char* q = end;
    if ((q[0] == '+' || q[0] == '-') && q[1] == 'i' && q[2] == '\0')
        return cplx(first, q[0] == '+' ? 1.0 : -1.0);
    double second = std::strtod(q, &end);
    if (end == q || *end != 'i' || end[1] != '\0') return bad();
    return cplx(first, second);
}

inline PlanarDomain parse_domain(const std::string& spec) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        size_t start = 0;
        for (size_t k = 0; k <= s.size(); ++k)
            if (k == s.size() || s[k] == sep) {
                parts.push_back(s.substr(start, k - start));
                start = k + 1;
            }
        return parts;
    };
    const auto parts = split(spec, ':');
    if (parts[0] == "disk") {
        double radius = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
        cplx center(0, 0);
        if (parts.size() > 1) {
            const auto at = parts[1].find('@');
            if (at != std::string::npos) {
                radius = std::stod(parts[1].substr(0, at));
                const auto xy = split(parts[1].substr(at + 1), ',');
                if (xy.size() != 2) throw std::invalid_argument("bad disk spec: " + spec);
                center = cplx(std::stod(xy[0]), std::stod(xy[1]));
            }
        }
        return PlanarDomain::disk(center, radius);
    }
    if (parts[0] == "annulus") {
        if (parts.size() != 3) throw std::invalid_argument("bad annulus spec: " + spec);
        return PlanarDomain::annulus(cplx(0, 0), std::stod(parts[1]), std::stod(parts[2]));
    }
    if (parts[0] == "rect") {
        if (parts.size() != 2) throw std::invalid_argument("bad rect spec: " + spec);
        const auto xy = split(parts[1], ',');
        if (xy.size() != 4) throw std::invalid_argument("bad rect spec: " + spec);
        return PlanarDomain::rect(std::stod(xy[0]), std::stod(xy[1]), std::stod(xy[2]),
                                  std::stod(xy[3]));
    }
    throw std::invalid_argument("unknown domain spec: " + spec);
}

inline QuadDifferential parse_differential(const std::string& name) {
    if (name == "leminiscate" || name == "lemniscate") return leminiscate_differential();
    if (name == "four-pole" || name == "fourpole" || name == "four_pole")
        return four_pole_differential();
    if (name.rfind("hyperelliptic:", 0) == 0)
        return hyperelliptic_differential(std::stoi(name.substr(14)));
    if (name == "constant" || name == "one") return constant_differential();
    return from_expression(name); // rational expression; no listed singularities
}

inline std::vector<cplx> auto_seeds(const QuadDifferential& qd, const PlanarDomain& dom) {
    std::vector<cplx> out;
    const BBox box = dom.bounding_box();
    const cplx center(0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1));
    const double R = 0.5 * std::max(box.width(), box.height());
    for (const double frac : {0.25, 0.5, 0.75})
        for (int k = 0; k < 8; ++k) {
            const cplx seed = center + std::polar(frac * R, 2.0 * kPi * (k + 0.5) / 8.0);
            if (dom.inside(seed) && qd.clearance(seed) > 3.0 * qd.exclusion_radius)
                out.push_back(seed);
        }
    return out;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& command,
                           const json& config, double wall_ms) {
    json manifest = {{"command", command},
                     {"version", kVersion},
                     {"wall_time_ms", wall_ms},
                     {"config", config}};
    io::write_text(dir / "run.json", manifest.dump(2) + "\n");
}

} // namespace cli_detail

/// Command-line front end; argv-style arguments without the program name.
/// Exit codes: 0 pass, 1 check or trace failure, 2 usage error.
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Inner variations of the Dirichlet energy: verification suites and "
                 "vertical-trajectory tracing"};
    app.require_subcommand(1);

    // verify
    std::string suite;
    int resolution = 256;
    double tol = 0.05;
    uint64_t seed = 12345;
    std::string out_dir = "out";
    bool svg = true;
    std::string format = "json";
    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("suite", suite, "one of: energy, variation, inequality, partition, "
                                       "trajectory, length-area, all")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    verify->add_option("--resolution", resolution, "base grid resolution")->check(CLI::Range(8, 4096));
    verify->add_option("--tol", tol, "holomorphy tolerance for is_hopf_harmonic");
    verify->add_option("--seed", seed, "battery RNG seed");
    verify->add_option("--out", out_dir, "output directory");
    verify->add_flag("--svg,!--no-svg", svg, "emit SVG figures");
    verify->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));

    // trace
    std::string differential;
    std::vector<std::string> seed_strings;
    std::string seeds_mode;
    std::string domain_spec = "disk:6";
    auto* trace = app.add_subcommand("trace", "trace vertical trajectories");
    trace->add_option("differential", differential,
                      "builtin name (leminiscate, four-pole, hyperelliptic:n, constant) or a "
                      "rational expression in z")
        ->required();
    trace->add_option("--seed", seed_strings, "trajectory seed, e.g. 1.118 or 0.3+0.1i");
    trace->add_option("--seeds", seeds_mode, "'auto' generates a seed grid");
    trace->add_option("--domain", domain_spec, "disk[:R[@cx,cy]] | annulus:r:R | rect:x0,y0,x1,y1");
    trace->add_option("--out", out_dir, "output directory");
    trace->add_flag("--svg,!--no-svg", svg, "emit SVG figures");
    trace->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    auto wall_ms = [&]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    };
    std::string command = "hopfvar";
    for (const auto& a : args) command += " " + a;
    const std::filesystem::path dir(out_dir);

    if (verify->parsed()) {
        VerifyConfig cfg;
        cfg.resolution = resolution;
        cfg.seed = seed;
        cfg.hopf_tol = tol;
        const auto results = run_suite(suite, cfg);
        bool all = true;
        for (const auto& c : results) {
            std::printf("%-4s  %-34s  %s  margin=%+.3e  (%.2fs)\n", c.id.c_str(),
                        c.name.c_str(), c.pass ? "PASS" : "FAIL", c.margin, c.runtime_seconds);
            all = all && c.pass;
        }
        const json report = report_json(results, cfg, suite);
        io::write_text(dir / "report.json", report.dump(2) + "\n");
        if (format == "csv") {
            std::string csv = "id,name,pass,margin\n";
            for (const auto& c : results)
                csv += c.id + "," + c.name + "," + (c.pass ? "1" : "0") + "," +
                       io::fmt(c.margin) + "\n";
            io::write_text(dir / "report.csv", csv);
        }
        cli_detail::write_manifest(dir, command,
                                   json{{"suite", suite},
                                        {"resolution", resolution},
                                        {"tol", tol},
                                        {"seed", seed},
                                        {"format", format}},
                                   wall_ms());
        return all ? 0 : 1;
    }

    // trace
    try {
        QuadDifferential qd = cli_detail::parse_differential(differential);
        PlanarDomain dom = cli_detail::parse_domain(domain_spec);
        std::vector<cplx> seeds;
        for (const auto& s : seed_strings) seeds.push_back(cli_detail::parse_complex(s));
        if (seeds_mode == "auto") {
            const auto autos = cli_detail::auto_seeds(qd, dom);
            seeds.insert(seeds.end(), autos.begin(), autos.end());
        } else if (!seeds_mode.empty()) {
            std::cerr << "unknown --seeds mode: " << seeds_mode << "\n";
            return 2;
        }
        if (seeds.empty()) {
            std::cerr << "no seeds given; use --seed or --seeds auto\n";
            return 2;
        }

        std::vector<Trajectory> traced;
        int successes = 0;
        for (size_t k = 0; k < seeds.size(); ++k) {
            try {
                Trajectory t = trace_vertical(qd, seeds[k], dom);
                std::printf("seed=(%g,%g)  kind=%s  h_length=%.6f  points=%zu\n",
                            seeds[k].real(), seeds[k].imag(), to_string(t.kind), t.h_length,
                            t.points.size());
                io::write_trajectory_csv(dir / ("trace_" + std::to_string(k) + ".csv"), t);
                traced.push_back(std::move(t));
                ++successes;
            } catch (const std::exception& e) {
                std::printf("seed=(%g,%g)  error: %s\n", seeds[k].real(), seeds[k].imag(),
                            e.what());
            }
        }
        if (svg && !traced.empty()) {
            std::vector<Trajectory> graph;
            if (!qd.zeros.empty()) graph = critical_graph(qd, dom);
            io::write_trajectories_svg(dir / "trace.svg", qd, dom, traced, graph);
        }
        cli_detail::write_manifest(dir, command,
                                   json{{"differential", differential},
                                        {"domain", domain_spec},
                                        {"svg", svg},
                                        {"format", format}},
                                   wall_ms());
        return successes > 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

} // namespace hopfvar
