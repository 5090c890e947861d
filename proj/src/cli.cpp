#include "wz/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "wz/config.hpp"
#include "wz/counterterm.hpp"
#include "wz/experiments.hpp"
#include "wz/lift.hpp"
#include "wz/parallel.hpp"
#include "wz/renorm.hpp"
#include "wz/solver.hpp"
#include "wz/wzcov.hpp"

namespace wz {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    int d = 1;
    int n = 64;
    double dt = 1.0 / 256.0;
    double t_final = 0.25;
    double eps = 1.0 / 16.0;
    double theta = 1.0 / 16.0;
    uint64_t seed = 1;
    std::string out = "out";
    std::string config_file;
    bool allow_unstable = false;
    int jobs = default_jobs();

    Lattice lattice() const {
        Lattice lat;
        lat.d = d;
        lat.n = n;
        lat.dt = dt;
        return lat;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_noise_scales) {
    cmd->add_option("--config", o.config_file, "key=value configuration file");
    cmd->add_option("--d", o.d, "spatial dimension (1, 2 or 3)");
    cmd->add_option("--n", o.n, "lattice points per dimension (power of two)");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--jobs", o.jobs, "worker thread cap");
    if (with_noise_scales) {
        cmd->add_option("--t-final", o.t_final, "final time");
        cmd->add_option("--epsilon", o.eps, "mollification scale");
        cmd->add_option("--theta", o.theta, "block length of the time interpolation");
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_flag("--allow-unstable", o.allow_unstable,
                      "accept eps^2 > theta configurations");
    }
}

// file config first, then CLI values that were actually passed win
void merge_config(const CLI::App* cmd, CommonOpts& o, KeyValueConfig& kv) {
    if (!o.config_file.empty()) {
        kv = KeyValueConfig::from_file(o.config_file, documented_keys());
        if (kv.has("d")) o.d = int(kv.get_int("d", o.d));
        if (kv.has("n")) o.n = int(kv.get_int("n", o.n));
        if (kv.has("dt")) o.dt = kv.get_double("dt", o.dt);
        if (kv.has("t_final")) o.t_final = kv.get_double("t_final", o.t_final);
        if (kv.has("epsilon")) o.eps = kv.get_double("epsilon", o.eps);
        if (kv.has("theta")) o.theta = kv.get_double("theta", o.theta);
        if (kv.has("seed")) o.seed = uint64_t(kv.get_int("seed", 1));
        if (kv.has("jobs")) o.jobs = int(kv.get_int("jobs", o.jobs));
        if (kv.has("allow_unstable")) o.allow_unstable = kv.get_bool("allow_unstable", false);
        // explicit CLI flags override the file
        auto over = [&](const char* flag, auto& target, auto parse) {
            auto* opt = cmd->get_option_no_throw(flag);
            if (opt && opt->count() > 0) target = parse(opt->as<std::string>());
        };
        over("--d", o.d, [](const std::string& s) { return std::stoi(s); });
        over("--n", o.n, [](const std::string& s) { return std::stoi(s); });
        over("--dt", o.dt, [](const std::string& s) { return std::stod(s); });
        over("--t-final", o.t_final, [](const std::string& s) { return std::stod(s); });
        over("--epsilon", o.eps, [](const std::string& s) { return std::stod(s); });
        over("--theta", o.theta, [](const std::string& s) { return std::stod(s); });
        over("--seed", o.seed, [](const std::string& s) { return (uint64_t)std::stoull(s); });
        over("--jobs", o.jobs, [](const std::string& s) { return std::stoi(s); });
    }
    // echo the resolved values
    kv.set("d", std::to_string(o.d));
    kv.set("n", std::to_string(o.n));
    kv.set("dt", std::to_string(o.dt));
    kv.set("t_final", std::to_string(o.t_final));
    kv.set("epsilon", std::to_string(o.eps));
    kv.set("theta", std::to_string(o.theta));
    kv.set("seed", std::to_string(o.seed));
    kv.set("jobs", std::to_string(o.jobs));
    kv.set("out", o.out);
}

void check_stability(const CommonOpts& o) {
    if (!o.allow_unstable && o.eps * o.eps > o.theta + 1e-12)
        throw CLI::ValidationError(
            "epsilon", "epsilon^2 > theta violates the standing assumption; "
                       "pass --allow-unstable to explore anyway");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stod(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int cmd_algebra_check(const CommonOpts& o, double alpha, double delta0) {
    sym::AlgebraConfig acfg;
    acfg.d = 3;
    if (alpha != 0) acfg.alpha = Rational(llround(alpha * 10000), 10000);
    if (delta0 != 0) acfg.delta0 = Rational(llround(delta0 * 10000), 10000);
    acfg.validate();
    fs::create_directories(o.out);

    bool all_ok = true;
    auto report_line = [&](const std::string& name, bool ok) {
        std::printf("%-34s %s\n", name.c_str(), ok ? "pass" : "FAIL");
        if (!ok) all_ok = false;
    };

    auto f0 = sym::f0_sector(acfg);
    bool id32 = true, id33 = true;
    for (const auto& t : f0) {
        id32 = id32 && sym::check_identity_32(t, acfg);
        id33 = id33 && sym::check_identity_33(t, acfg);
    }
    report_line("identity (3.2) on F0", id32);
    report_line("identity (3.3) on F0", id33);

    bool anti = true;
    std::vector<sym::Tree> h0p = {
        sym::tree_x(1), sym::tree_int(MIdx{}, sym::tree_psi()),
        sym::tree_int(MIdx::unit(1), sym::tree_psi()),
        sym::tree_int(MIdx{}, sym::tree_psi_pow(2)),
        sym::tree_int(MIdx{}, sym::tree_psi_pow(3))};
    for (const auto& t : h0p) anti = anti && sym::check_identity_antipode(t, acfg);
    report_line("antipode identity on H0+", anti);

    bool fixed = true;
    for (const auto& t : {sym::tree_one(), sym::tree_noise(), sym::tree_psi()})
        fixed = fixed && (sym::renorm_M(t, acfg) == sym::LinComb(t));
    report_line("M fixes 1, Xi, Psi", fixed);

    // JSON export of the sectors with homogeneities
    json j;
    j["alpha"] = acfg.alpha.to_double();
    j["delta0"] = acfg.delta0.to_double();
    auto sector_json = [&](const std::vector<sym::Tree>& ts) {
        json arr = json::array();
        for (const auto& t : ts) {
            json e;
            e["tree"] = t.str();
            e["hom_c0"] = t.hom().c0;
            e["hom_c1"] = t.hom().c1;
            e["hom_c2"] = t.hom().c2;
            e["hom_value"] = acfg.hom_value(t).to_double();
            arr.push_back(e);
        }
        return arr;
    };
    j["f_minus"] = sector_json(sym::negative_sector(acfg.alpha, acfg, true));
    j["f_zero_weak"] = sector_json(sym::negative_sector(acfg.alpha, acfg, false));
    j["f0"] = sector_json(f0);
    j["identities_pass"] = all_ok;
    write_json(j, o.out + "/sectors.json");
    return all_ok ? 0 : 2;
}

int cmd_build_kernels(CommonOpts& o, const CLI::App* cmd, double support_radius, int r,
                      int n_images, int n_dyadic, bool lemmas) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    fs::create_directories(o.out);
    KernelSpec spec;
    spec.lat = o.lattice();
    spec.support_radius = support_radius;
    spec.r = r;
    spec.n_images = n_images;
    KernelTable K = build_K(spec);
    K.save(o.out + "/kernel_K.wzf");

    json j;
    j["config"] = kv.echo();
    j["support_radius"] = support_radius;
    j["r"] = r;
    j["abs_mass"] = K.abs_mass;
    j["moments"] = K.moments;
    if (n_dyadic > 0) {
        auto parts = dyadic_decompose(K, n_dyadic);
        json dj = json::array();
        for (size_t m = 0; m < parts.size(); ++m) {
            double sup = 0;
            for (double x : parts[m].val) sup = std::max(sup, std::fabs(x));
            dj.push_back(json{{"m", m}, {"sup", sup}});
        }
        j["dyadic_sup"] = dj;
    }
    if (lemmas) {
        KernelLemmaConfig lc;
        lc.K = &K;
        lc.ladder = {{o.eps, o.theta}, {o.eps / 2, o.theta / 2}};
        j["lemmas"] = check_kernel_lemmas(lc);
    }
    write_json(j, o.out + "/kernel_report.json");
    std::printf("kernel built: nsl=%d abs_mass=%.6g\n", K.nsl, K.abs_mass);
    return 0;
}

int cmd_gen_noise(CommonOpts& o, const CLI::App* cmd) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    check_stability(o);
    fs::create_directories(o.out);
    Lattice lat = o.lattice();
    long long nt = llround(o.t_final / lat.dt);
    long long margin = llround(o.eps * o.eps / lat.dt) + llround(o.theta / lat.dt) + 4;
    NoiseField white = sample_white(lat, -margin, int(nt + 2 * margin), o.seed);
    NoiseField reg = regularize(white, o.eps, o.theta);
    save_field(white.f, o.out + "/noise_white.wzf");
    save_field(reg.f, o.out + "/noise_wz.wzf");
    json j;
    j["config"] = kv.echo();
    j["white_window"] = json{{"j0", white.f.j0}, {"nt", white.f.nt}};
    j["wz_window"] = json{{"j0", reg.f.j0}, {"nt", reg.f.nt}};
    write_json(j, o.out + "/noise_report.json");
    std::printf("noise written to %s\n", o.out.c_str());
    return 0;
}

int cmd_counterterms(CommonOpts& o, const CLI::App* cmd, int ladder, int t_samples,
                     double support_radius, const std::string& theta_rule, bool no_c2) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    kv.set("ladder", std::to_string(ladder));
    kv.set("t_samples", std::to_string(t_samples));
    kv.set("theta_rule", theta_rule);
    fs::create_directories(o.out);

    json j;
    j["config"] = kv.echo();
    json rungs = json::array();
    std::vector<double> epss, c1_means, c2_means;
    for (int L = 0; L < std::max(1, ladder); ++L) {
        double eps = o.eps / std::pow(2.0, L);
        double theta;
        if (theta_rule == "eps")
            theta = eps;
        else if (theta_rule == "eps2")
            theta = std::max(eps * eps, o.lattice().dt);
        else
            theta = o.theta;
        // matched lattice: dx tied to eps across the ladder
        Lattice lat = o.lattice();
        if (ladder > 1) {
            while (eps < 2.0 * lat.dx() * (1 - 1e-12)) lat.n *= 2;
        }
        if (!o.allow_unstable && eps * eps > theta + 1e-12)
            throw CLI::ValidationError("theta", "eps^2 > theta on rung " + std::to_string(L));
        KernelSpec spec;
        spec.lat = lat;
        spec.support_radius = support_radius;
        KernelTable K = build_K(spec);
        WzCov cov(K, eps, theta);
        CountertermTable tab = compute_counterterms(cov, t_samples, !no_c2);
        tab.save_csv(o.out + "/counterterms_L" + std::to_string(L) + ".csv");
        double c1m = 0, c2m = 0;
        for (double v : tab.C1) c1m += v;
        for (double v : tab.C2) c2m += v;
        c1m /= double(tab.C1.size());
        c2m /= double(tab.C2.size());
        rungs.push_back(json{{"epsilon", eps},
                             {"theta", theta},
                             {"n", lat.n},
                             {"C1_mean", c1m},
                             {"C2_mean", c2m},
                             {"c_mean", 3 * c1m - 9 * c2m}});
        epss.push_back(eps);
        c1_means.push_back(c1m);
        c2_means.push_back(c2m);
        std::printf("rung %d: eps=%.5g theta=%.5g n=%d C1=%.6g C2=%.6g\n", L, eps, theta,
                    lat.n, c1m, c2m);
    }
    j["rungs"] = rungs;
    if (epss.size() >= 3) {
        j["C1_log_slope"] = fit_log_slope(epss, c1_means);
        auto inc = halving_increments(c2_means);
        j["C2_increments"] = inc;
    }
    write_json(j, o.out + "/counterterm_report.json");
    return 0;
}

int cmd_lift_probe(CommonOpts& o, const CLI::App* cmd, const std::string& taus_s,
                   const std::string& stage_s, const std::string& lambdas_s, int n_mc,
                   double support_radius, int t_samples) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    check_stability(o);
    fs::create_directories(o.out);

    std::vector<sym::Tree> taus;
    {
        size_t pos = 0;
        while (pos < taus_s.size()) {
            size_t comma = taus_s.find(',', pos);
            if (comma == std::string::npos) comma = taus_s.size();
            taus.push_back(sym::parse_tree(taus_s.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    std::vector<double> lambdas = parse_list(lambdas_s);
    LiftStage stage =
        (stage_s == "renormalised") ? LiftStage::renormalised : LiftStage::canonical;

    Lattice lat = o.lattice();
    KernelSpec spec;
    spec.lat = lat;
    spec.support_radius = support_radius;
    KernelTable K = build_K(spec);
    sym::AlgebraConfig acfg;
    acfg.d = lat.d;

    CountertermTable tab;
    const CountertermTable* tabp = nullptr;
    if (stage == LiftStage::renormalised) {
        WzCov cov(K, o.eps, o.theta);
        tab = compute_counterterms(cov, t_samples);
        tabp = &tab;
    }
    ProbeResult res = scaling_probe(K, acfg, lat, o.eps, o.theta, taus, stage, lambdas,
                                    n_mc, o.seed, 8, tabp);
    std::ofstream csv(o.out + "/probe.csv");
    csv.precision(17);
    csv << "tau,lambda,stage,second_moment,stderr\n";
    for (const auto& r : res.rows)
        csv << r.tau << "," << r.lambda << "," << r.stage << "," << r.second_moment << ","
            << r.stderr_ << "\n";
    json j;
    j["config"] = kv.echo();
    j["slopes"] = res.fitted_slope;
    json targets;
    for (const auto& t : taus)
        targets[t.str()] = 2.0 * acfg.hom_value(t).to_double();
    j["slope_targets_2hom"] = targets;
    write_json(j, o.out + "/probe_report.json");
    for (const auto& [k, v] : res.fitted_slope)
        std::printf("%-16s slope %.3f (target %.3f)\n", k.c_str(), v,
                    targets[k].get<double>());
    return 0;
}

int cmd_simulate(CommonOpts& o, const CLI::App* cmd, bool renorm, const std::string& ic,
                 double cap, double support_radius, int t_samples) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    kv.set("renorm", renorm ? "1" : "0");
    kv.set("ic", ic);
    kv.set("cap", std::to_string(cap));
    check_stability(o);
    fs::create_directories(o.out);

    Lattice lat = o.lattice();
    long long nt = llround(o.t_final / lat.dt);
    long long margin = llround(o.eps * o.eps / lat.dt) + llround(o.theta / lat.dt) + 4;
    NoiseField white = sample_white(lat, -margin, int(nt + 2 * margin), o.seed);
    NoiseField reg = regularize(white, o.eps, o.theta);

    CountertermTable tab;
    const CountertermTable* tabp = nullptr;
    if (renorm) {
        KernelSpec spec;
        spec.lat = lat;
        spec.support_radius = support_radius;
        KernelTable K = build_K(spec);
        WzCov cov(K, o.eps, o.theta);
        tab = compute_counterterms(cov, t_samples);
        tabp = &tab;
    }

    SolverConfig sc;
    sc.lat = lat;
    sc.t_final = o.t_final;
    sc.renorm = renorm;
    sc.ic = ic;
    sc.blowup_cap = cap;
    std::vector<long long> snaps;
    for (int i = 1; i <= 8; ++i) snaps.push_back(nt * i / 8);
    Trajectory tr = run(sc, &reg, tabp, snaps);

    json j;
    j["config"] = kv.echo();
    j["blew_up"] = tr.blew_up;
    j["stop_step"] = tr.stop_step;
    json norms = json::array();
    for (size_t i = 0; i < tr.snaps.size(); ++i) {
        GridField g(lat, tr.snap_steps[i], 1);
        g.v = tr.snaps[i];
        save_field(g, o.out + "/phi_" + std::to_string(tr.snap_steps[i]) + ".wzf");
        double sup = 0;
        for (double x : tr.snaps[i]) sup = std::max(sup, std::fabs(x));
        norms.push_back(json{{"step", tr.snap_steps[i]},
                             {"t", double(tr.snap_steps[i]) * lat.dt},
                             {"l2", g.slice_l2(0)},
                             {"sup", sup}});
    }
    j["norms"] = norms;
    write_json(j, o.out + "/simulate_report.json");
    std::printf("simulate: %s after %lld steps\n", tr.blew_up ? "blow-up" : "done",
                tr.stop_step);
    if (tr.blew_up) return 2;
    return 0;
}

int cmd_converge(CommonOpts& o, const CLI::App* cmd, const std::string& kind, int ladder,
                 int n_mc, double support_radius, bool emit_plot_data, bool renorm) {
    KeyValueConfig kv;
    merge_config(cmd, o, kv);
    fs::create_directories(o.out);
    Lattice lat = o.lattice();

    std::vector<LadderRung> rungs;
    for (int L = 0; L < std::max(1, ladder); ++L) {
        double eps = o.eps / std::pow(2.0, L);
        double theta = std::max(eps * eps, lat.dt);
        rungs.push_back({eps, theta});
    }

    json j;
    if (kind == "noise") {
        NoiseConvConfig nc;
        nc.lat = lat;
        nc.ladder = rungs;
        nc.n_mc = n_mc;
        nc.seed0 = o.seed;
        nc.jobs = o.jobs;
        long long nt = llround(o.t_final / lat.dt);
        long long margin = 2 * llround(rungs.front().eps * rungs.front().eps / lat.dt) +
                           2 * llround(rungs.front().theta / lat.dt) + 8;
        nc.j0 = -margin;
        nc.nt = int(nt + 2 * margin);
        nc.region_lo = llround(0.15 * double(nt));
        nc.region_hi = llround(0.85 * double(nt));
        nc.alpha_p = (lat.d == 3) ? -2.6 : -1.9;
        for (double l = 0.25; l >= 4.0 * lat.dx(); l /= 2) nc.scales.push_back(l);
        j = noise_convergence_experiment(nc);
    } else if (kind == "kstar") {
        KernelSpec spec;
        spec.lat = lat;
        spec.support_radius = support_radius;
        KernelTable K = build_K(spec);
        KstarConvConfig kc;
        kc.lat = lat;
        kc.ladder = rungs;
        kc.n_mc = n_mc;
        kc.seed0 = o.seed;
        kc.jobs = o.jobs;
        kc.K = &K;
        long long nt = llround(o.t_final / lat.dt);
        for (int i = 1; i <= 4; ++i) kc.t_steps.push_back(nt * i / 4);
        long long margin = K.nsl + 2 * llround(rungs.front().theta / lat.dt) + 8;
        kc.j0 = -margin;
        kc.nt = int(nt + 2 * margin);
        kc.alpha_p = (lat.d == 3) ? -0.6 : -0.2;
        for (double l = 0.25; l >= 4.0 * lat.dx(); l /= 2) kc.scales.push_back(l);
        j = kstar_convergence_experiment(kc);
    } else if (kind == "solution") {
        KernelSpec spec;
        spec.lat = lat;
        spec.support_radius = support_radius;
        KernelTable K = build_K(spec);
        SolutionConvConfig sc;
        sc.lat = lat;
        sc.ladder = rungs;
        sc.n_seeds = n_mc;
        sc.seed0 = o.seed;
        sc.t_eval = o.t_final;
        sc.renorm = renorm;
        sc.K = &K;
        sc.jobs = o.jobs;
        j = solution_convergence_experiment(sc);
    } else {
        throw CLI::ValidationError("kind", "expected noise, kstar or solution");
    }
    j["config"] = kv.echo();
    write_json(j, o.out + "/converge_" + kind + ".json");

    // plot-ready CSV
    std::ofstream csv(o.out + "/converge_" + kind + ".csv");
    csv.precision(17);
    csv << "rung,epsilon,theta,mean,stderr\n";
    int ri = 0;
    for (const auto& r : j["rungs"]) {
        double mean = 0, se = 0;
        for (const auto& key : {"mean_seminorm", "mean_sup_norm", "l2_to_finest_mean"})
            if (r.contains(key)) mean = r[key].get<double>();
        for (const auto& key : {"stderr", "l2_to_finest_stderr"})
            if (r.contains(key)) se = r[key].get<double>();
        csv << ri++ << "," << r["epsilon"].get<double>() << ","
            << r["theta"].get<double>() << "," << mean << "," << se << "\n";
    }
    if (emit_plot_data) {
        std::ofstream dat(o.out + "/converge_" + kind + ".dat");
        dat.precision(17);
        ri = 0;
        for (const auto& r : j["rungs"]) {
            double mean = 0;
            for (const auto& key : {"mean_seminorm", "mean_sup_norm", "l2_to_finest_mean"})
                if (r.contains(key)) mean = r[key].get<double>();
            dat << r["epsilon"].get<double>() << " " << mean << "\n";
            ++ri;
        }
    }
    std::printf("converge %s written to %s\n", kind.c_str(), o.out.c_str());
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Wong-Zakai simulation laboratory for the dynamical Phi^4 model"};
    app.require_subcommand(1);

    CommonOpts o;

    // algebra-check
    auto* alg = app.add_subcommand("algebra-check", "run the exact symbolic identity suites");
    double alpha = 0, delta0 = 0;
    alg->add_option("--out", o.out, "output directory");
    alg->add_option("--alpha", alpha, "noise regularity (default -2.55)");
    alg->add_option("--delta0", delta0, "C-symbol weight (default 0.1)");

    // build-kernels
    auto* bk = app.add_subcommand("build-kernels", "build and check the truncated kernel");
    double support_radius = 1.0;
    int r = 3, n_images = 3, n_dyadic = 0;
    bool lemmas = false;
    add_common(bk, o, true);
    bk->add_option("--support-radius", support_radius, "kernel support radius");
    bk->add_option("--r", r, "moment annihilation order");
    bk->add_option("--n-images", n_images, "periodization images");
    bk->add_option("--n-dyadic", n_dyadic, "dyadic decomposition depth");
    bk->add_flag("--lemmas", lemmas, "run the kernel lemma sup-ratio report");

    // gen-noise
    auto* gn = app.add_subcommand("gen-noise", "dump one noise realization");
    add_common(gn, o, true);

    // counterterms
    auto* ct = app.add_subcommand("counterterms", "compute C1, C2 and divergence fits");
    int ladder = 1, t_samples = 8;
    std::string theta_rule = "fixed";
    bool b_no_c2 = false;
    add_common(ct, o, true);
    ct->add_option("--ladder", ladder, "number of dyadic rungs");
    ct->add_option("--t-samples", t_samples, "samples per block period");
    ct->add_option("--theta-rule", theta_rule, "fixed | eps | eps2");
    ct->add_option("--support-radius", support_radius, "kernel support radius");
    ct->add_flag("--no-c2", b_no_c2, "skip the C2 quadrature");

    // lift-probe
    auto* lp = app.add_subcommand("lift-probe", "model scaling probes");
    std::string taus_s = "X1,Psi,Psi^2", stage_s = "canonical",
                lambdas_s = "0.125,0.1875,0.25,0.375";
    int n_mc = 16;
    add_common(lp, o, true);
    lp->add_option("--taus", taus_s, "comma-separated trees");
    lp->add_option("--stage", stage_s, "canonical | renormalised");
    lp->add_option("--lambdas", lambdas_s, "comma-separated scales");
    lp->add_option("--n-mc", n_mc, "realizations");
    lp->add_option("--support-radius", support_radius, "kernel support radius");
    lp->add_option("--t-samples", t_samples, "counterterm samples per block");

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate the (renormalised) equation");
    bool renorm = false;
    std::string ic = "sin";
    double cap = 1e6;
    add_common(sim, o, true);
    sim->add_flag("--renorm", renorm, "enable the renormalisation counterterm");
    sim->add_option("--ic", ic, "initial condition: sin | zero | constant:<a>");
    sim->add_option("--cap", cap, "blow-up cap on max|Phi|");
    sim->add_option("--support-radius", support_radius, "kernel support radius");
    sim->add_option("--t-samples", t_samples, "counterterm samples per block");

    // converge
    auto* cv = app.add_subcommand("converge", "convergence experiments");
    std::string kind = "noise";
    bool emit_plot_data = false;
    add_common(cv, o, true);
    cv->add_option("--kind", kind, "noise | kstar | solution");
    cv->add_option("--ladder", ladder, "number of dyadic rungs");
    cv->add_option("--n-mc", n_mc, "realizations / seeds");
    cv->add_option("--support-radius", support_radius, "kernel support radius");
    cv->add_flag("--renorm", renorm, "renormalised solution ladder");
    cv->add_flag("--emit-plot-data", emit_plot_data, "write gnuplot two-column files");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (alg->parsed()) return cmd_algebra_check(o, alpha, delta0);
        if (bk->parsed())
            return cmd_build_kernels(o, bk, support_radius, r, n_images, n_dyadic, lemmas);
        if (gn->parsed()) return cmd_gen_noise(o, gn);
        if (ct->parsed())
            return cmd_counterterms(o, ct, ladder, t_samples, support_radius, theta_rule,
                                    b_no_c2);
        if (lp->parsed())
            return cmd_lift_probe(o, lp, taus_s, stage_s, lambdas_s, n_mc, support_radius,
                                  t_samples);
        if (sim->parsed())
            return cmd_simulate(o, sim, renorm, ic, cap, support_radius, t_samples);
        if (cv->parsed())
            return cmd_converge(o, cv, kind, ladder, n_mc, support_radius, emit_plot_data,
                                renorm);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 1;
}

}  // namespace wz
