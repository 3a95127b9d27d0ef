// maxlab: numerical laboratory for maximal operators on negatively curved
// surfaces and finite metric measure spaces.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxlab/discrete.hpp"
#include "maxlab/experiments.hpp"
#include "maxlab/halfplane.hpp"
#include "maxlab/io.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/revolution.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace maxlab;

namespace {

// grid spec lo:hi:n, geometric; "e4" means exp(4)
std::vector<double> parse_grid(const std::string& spec) {
    auto parse_num = [](const std::string& s) {
        if (!s.empty() && (s[0] == 'e' || s[0] == 'E'))
            return std::exp(std::stod(s.substr(1)));
        return std::stod(s);
    };
    const size_t c1 = spec.find(':');
    const size_t c2 = spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw domain_error("t-grid spec must be lo:hi:n");
    const double lo = parse_num(spec.substr(0, c1));
    const double hi = parse_num(spec.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(spec.substr(c2 + 1));
    return geometric_grid(lo, hi, n);
}

struct CommonFlags {
    std::string config_file, out_dir = "maxlab-out", t_grid_spec;
    ScenarioConfig cfg;
    CLI::App* sub = nullptr;
    CLI::Option *oa, *ob, *om, *otau, *onu, *odelta, *ocm, *oomega, *omesh,
        *otol, *oseed, *ogrid;
};

void add_scenario_flags(CLI::App* sub, CommonFlags& fl) {
    fl.sub = sub;
    fl.oa = sub->add_option("--a", fl.cfg.a, "curvature constant a");
    fl.ob = sub->add_option("--b", fl.cfg.b, "curvature constant b");
    fl.om = sub->add_option("--m", fl.cfg.m, "dimension");
    fl.otau = sub->add_option("--tau", fl.cfg.tau, "bump location");
    fl.onu = sub->add_option("--nu", fl.cfg.nu, "bump half-width");
    fl.odelta = sub->add_option("--delta", fl.cfg.delta, "bump amplitude cap");
    fl.ocm = sub->add_option("--c-m", fl.cfg.c_m, "spike constant c_m");
    fl.oomega = sub->add_option("--omega", fl.cfg.omega, "Lorentz index");
    fl.omesh = sub->add_option("--mesh-res", fl.cfg.mesh_res, "mesh resolution");
    fl.otol = sub->add_option("--tol", fl.cfg.tol, "fit tolerance");
    fl.oseed = sub->add_option("--seed", fl.cfg.seed, "RNG seed");
    fl.ogrid = sub->add_option("--t-grid", fl.t_grid_spec,
                               "grid lo:hi:n (geometric; e4 = exp(4))");
    sub->add_option("--out", fl.out_dir, "output directory");
    sub->add_option("--config", fl.config_file, "key=value config file");
}

// precedence: scenario defaults, then config file, then explicit flags
ScenarioConfig resolve_config(const std::string& scenario, CommonFlags& fl) {
    ScenarioConfig cfg = scenario_defaults(scenario);
    if (!fl.config_file.empty()) {
        const auto kv = read_kv_file(fl.config_file);
        auto getd = [&](const char* k, double& slot) {
            if (kv.count(k)) slot = std::stod(kv.at(k));
        };
        getd("a", cfg.a);
        getd("b", cfg.b);
        getd("tau", cfg.tau);
        getd("nu", cfg.nu);
        getd("delta", cfg.delta);
        getd("c_m", cfg.c_m);
        getd("omega", cfg.omega);
        getd("mesh_res", cfg.mesh_res);
        getd("tol", cfg.tol);
        if (kv.count("m")) cfg.m = std::stoi(kv.at("m"));
        if (kv.count("seed")) cfg.seed = std::stoull(kv.at("seed"));
        if (kv.count("t_grid")) fl.t_grid_spec = kv.at("t_grid");
    }
    if (fl.oa->count()) cfg.a = fl.cfg.a;
    if (fl.ob->count()) cfg.b = fl.cfg.b;
    if (fl.om->count()) cfg.m = fl.cfg.m;
    if (fl.otau->count()) cfg.tau = fl.cfg.tau;
    if (fl.onu->count()) cfg.nu = fl.cfg.nu;
    if (fl.odelta->count()) cfg.delta = fl.cfg.delta;
    if (fl.ocm->count()) cfg.c_m = fl.cfg.c_m;
    if (fl.oomega->count()) cfg.omega = fl.cfg.omega;
    if (fl.omesh->count()) cfg.mesh_res = fl.cfg.mesh_res;
    if (fl.otol->count()) cfg.tol = fl.cfg.tol;
    if (fl.oseed->count()) cfg.seed = fl.cfg.seed;
    if (!fl.t_grid_spec.empty()) {
        if (fl.t_grid_spec.find(':') != std::string::npos) {
            cfg.t_grid = parse_grid(fl.t_grid_spec);
        } else {
            cfg.t_grid.clear();
            std::string item;
            for (char ch : fl.t_grid_spec + ",")
                if (ch == ',') {
                    if (!item.empty()) cfg.t_grid.push_back(std::stod(item));
                    item.clear();
                } else {
                    item += ch;
                }
        }
    }
    return cfg;
}

int run_and_emit(const ScenarioConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    validate_config(cfg);
    const ScenarioResult res = run_scenario(cfg);
    auto manifest = cfg.to_kv();
    manifest["out"] = out_dir;
    write_manifest(manifest, out_dir + "/manifest.txt");
    write_series_csv(res.series, out_dir + "/series.csv");
    write_report_json(res, cfg, out_dir + "/report.json");
    std::printf("%s: %s\n", cfg.scenario.c_str(), res.pass ? "PASS" : "FAIL");
    for (const auto& [name, ok] : res.checks)
        std::printf("  [%s] %s\n", ok ? "ok" : "FAIL", name.c_str());
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* th = std::getenv("MAXLAB_THREADS")) {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, atoi(th)));
#endif
    }
    CLI::App app{"maximal-operator laboratory"};
    app.require_subcommand(1);

    const std::vector<std::string> scenarios = {
        "stromberg-i",        "stromberg-ii",
        "connected-sum-uncentred", "connected-sum-centred",
        "conformal-sandwich", "curvature-pinching",
        "endpoint-majorant"};
    std::vector<std::unique_ptr<CommonFlags>> flags;
    for (const auto& name : scenarios) {
        auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
        flags.push_back(std::make_unique<CommonFlags>());
        add_scenario_flags(sub, *flags.back());
    }

    // utility: distance
    auto* dist = app.add_subcommand("distance", "numeric geodesic distance");
    std::string geom = "stromberg";
    double da = 1.0, db = 2.0, x1 = 0, y1 = 1, x2 = 0, y2 = 2, th1 = 0, th2 = 0,
           res = 0.1;
    std::string dump_prefix;
    dist->add_option("--geometry", geom,
                     "stromberg | hyperbolic | connected-sum");
    dist->add_option("--a", da);
    dist->add_option("--b", db);
    dist->add_option("--x1", x1);
    dist->add_option("--y1", y1);
    dist->add_option("--x2", x2);
    dist->add_option("--y2", y2);
    dist->add_option("--t1", x1);
    dist->add_option("--th1", th1);
    dist->add_option("--t2", x2);
    dist->add_option("--th2", th2);
    dist->add_option("--mesh-res", res);
    dist->add_option("--dump-mesh", dump_prefix,
                     "write <prefix>_nodes.csv and <prefix>_edges.csv");

    // utility: volume
    auto* vol = app.add_subcommand("volume", "numeric ball volume");
    double vR = 1.0;
    vol->add_option("--geometry", geom);
    vol->add_option("--a", da);
    vol->add_option("--b", db);
    vol->add_option("--x1", x1);
    vol->add_option("--y1", y1);
    vol->add_option("--t1", x1);
    vol->add_option("--radius", vR);
    vol->add_option("--mesh-res", res);

    // utility: maximal
    auto* mx = app.add_subcommand("maximal", "maximal operator on a CSV space");
    std::string edges_csv, weights_csv, field_csv, op_name = "centred",
                out_prefix = "maximal";
    double rmin = 0.0, rmax = INFINITY, mxomega = 1.5;
    mx->add_option("--space", edges_csv, "edge list CSV")->required();
    mx->add_option("--weights", weights_csv, "node weight CSV");
    mx->add_option("--field", field_csv, "field CSV")->required();
    mx->add_option("--op", op_name, "centred | uncentred | omega");
    mx->add_option("--omega", mxomega);
    mx->add_option("--rmin", rmin);
    mx->add_option("--rmax", rmax);
    mx->add_option("--out", out_prefix);

    // utility: discretise
    auto* disc = app.add_subcommand("discretise", "eta-net of a CSV space");
    double eta = 1.0;
    uint64_t dseed = 1;
    std::string disc_out = "net.csv";
    disc->add_option("--space", edges_csv, "edge list CSV")->required();
    disc->add_option("--weights", weights_csv);
    disc->add_option("--eta", eta);
    disc->add_option("--seed", dseed);
    disc->add_option("--out", disc_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (size_t i = 0; i < scenarios.size(); ++i)
            if (flags[i]->sub->parsed())
                return run_and_emit(resolve_config(scenarios[i], *flags[i]),
                                    flags[i]->out_dir);

        if (dist->parsed() || vol->parsed()) {
            if (geom == "connected-sum") {
                const auto prof = build_connected_sum_profile(da, db, 2);
                const RevolutionMetric g = metric_of(prof);
                if (dist->parsed()) {
                    const auto r = numeric_distance_revolution(
                        g, {x1, th1}, {x2, th2}, res);
                    std::printf("distance=%.12g error=%.2g levels=%d\n",
                                r.value, r.error_estimate, r.mesh_levels_used);
                } else {
                    RevolutionMesh mesh(g, x1 - vR - 1.0, x1 + vR + 1.0, res);
                    DijkstraTree tree =
                        run_dijkstra(mesh, mesh.nearest_node({x1, 0.0}));
                    BallArcProfile ball(mesh, tree, {x1, 0.0}, {vR},
                                        DistanceQuality::polished);
                    std::printf("volume=%.12g\n", ball.volume(0));
                }
                return 0;
            }
            const ConformalProfile prof = geom == "hyperbolic"
                                              ? hyperbolic_profile(da)
                                              : stromberg_profile(da, db);
            if (dist->parsed()) {
                const auto r =
                    numeric_distance_halfplane(prof, {x1, y1}, {x2, y2}, res);
                std::printf("distance=%.12g error=%.2g levels=%d\n", r.value,
                            r.error_estimate, r.mesh_levels_used);
                if (!dump_prefix.empty()) {
                    HalfPlaneWindow win;
                    win.add_ball(prof, {x1, y1},
                                 hyperbolic_distance({x1, y1}, {x2, y2}, prof.a) *
                                         1.02 + 0.5);
                    HalfPlaneMesh mesh(prof, win, res);
                    mesh.dump_csv(dump_prefix + "_nodes.csv",
                                  dump_prefix + "_edges.csv");
                }
            } else {
                HalfPlaneWindow win;
                const HalfPlanePoint c{x1, y1};
                win.add_ball(prof, c, vR * 1.02 + 0.5);
                HalfPlaneMesh mesh(prof, win, res);
                DijkstraTree tree = dijkstra(mesh, mesh.nearest_node(c));
                BallRowProfile ball(mesh, tree, c, {vR},
                                    DistanceQuality::polished);
                std::printf("volume=%.12g\n", ball.volume(0));
                if (geom == "hyperbolic") {
                    const auto sf = make_space_form(da, 2);
                    std::printf("closed_form=%.12g\n",
                                space_form_ball_volume(sf, vR));
                }
            }
            return 0;
        }

        if (mx->parsed()) {
            const FiniteSpace X = finite_space_from_csv(edges_csv, weights_csv);
            const SampledField f = field_from_csv(field_csv);
            MaximalReport rep;
            if (op_name == "centred")
                rep = centred_maximal(f, X, RadiusWindow::band(rmin, rmax));
            else if (op_name == "uncentred")
                rep = uncentred_maximal(f, X, RadiusWindow::band(rmin, rmax));
            else if (op_name == "omega")
                rep = omega_maximal(f, X, mxomega);
            else
                throw domain_error("unknown operator " + op_name);
            std::FILE* fp = std::fopen((out_prefix + ".csv").c_str(), "w");
            if (!fp) throw std::runtime_error("cannot write report csv");
            std::fprintf(fp, "point_id,value,argmax_radius\n");
            for (size_t i = 0; i < rep.values.size(); ++i)
                std::fprintf(fp, "%lld,%.17g,%.17g\n",
                             (long long)rep.values.id[i], rep.values.value[i],
                             rep.argmax_radius[i]);
            std::fclose(fp);
            nlohmann::json j;
            j["operator"] = op_name;
            j["window"] = {{"r_min", rmin}, {"r_max", rmax}};
            j["grid_correction"] = rep.grid_correction;
            j["center_restricted"] = rep.center_restricted;
            j["weak_11_ratio"] = weak_type_ratio(rep, f, 1.0);
            std::ofstream js(out_prefix + ".json");
            js << j.dump(2) << "\n";
            std::printf("wrote %s.csv and %s.json\n", out_prefix.c_str(),
                        out_prefix.c_str());
            return 0;
        }

        if (disc->parsed()) {
            const FiniteSpace X = finite_space_from_csv(edges_csv, weights_csv);
            const Discretisation net = build_discretisation(X, eta, dseed);
            std::FILE* fp = std::fopen(disc_out.c_str(), "w");
            if (!fp) throw std::runtime_error("cannot write " + disc_out);
            std::fprintf(fp, "node\n");
            for (int64_t z : net.net) std::fprintf(fp, "%lld\n", (long long)z);
            std::fclose(fp);
            std::printf("net_size=%zu separation=%.6g covering=%.6g\n",
                        net.net.size(), net.separation, net.covering_radius);
            return 0;
        }
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
