#include "wz/experiments.hpp"

#include <cmath>
#include <fstream>

#include "wz/parallel.hpp"
#include "wz/rng.hpp"
#include "wz/wzcov.hpp"

namespace wz {

GridField kernel_convolve(const KernelTable& K, const GridField& field, long long j_lo,
                          long long j_hi) {
    const Lattice& lat = K.lat;
    size_t nc = lat.ncells();
    long long in_lo = field.j0, in_hi = field.j0 + field.nt;
    if (j_lo - (K.nsl - 1) < in_lo)
        throw std::out_of_range("kernel_convolve: field window too short");
    std::vector<std::vector<cplx>> ihat(size_t(field.nt));
    for (int j = 0; j < field.nt; ++j)
        ihat[size_t(j)] = spatial_fft(field.slice(j), lat.d, lat.n);
    const auto& hat = K.hat();
    GridField out(lat, j_lo, int(j_hi - j_lo));
    std::vector<cplx> acc(nc);
    for (long long j = j_lo; j < j_hi; ++j) {
        std::fill(acc.begin(), acc.end(), cplx(0, 0));
        for (int s = 1; s < K.nsl; ++s) {
            long long j1 = j - s;
            if (j1 < in_lo || j1 >= in_hi) continue;
            const double* kh = hat.data() + size_t(s) * nc;
            const auto& ih = ihat[size_t(j1 - in_lo)];
            for (size_t c = 0; c < nc; ++c) acc[c] += lat.dt * kh[c] * ih[c];
        }
        spatial_ifft(acc, lat.d, lat.n, out.slice(int(j - j_lo)));
    }
    return out;
}

namespace {

struct MeanStderr {
    double mean = 0, se = 0;
};

MeanStderr mean_stderr(const std::vector<double>& v) {
    MeanStderr r;
    if (v.empty()) return r;
    for (double x : v) r.mean += x;
    r.mean /= double(v.size());
    if (v.size() > 1) {
        double var = 0;
        for (double x : v) var += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(var / (double(v.size()) * double(v.size() - 1)));
    }
    return r;
}

double rate_fit(const std::vector<double>& eps, const std::vector<double>& means) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = eps.size();
    for (size_t i = 0; i < n; ++i) {
        double x = std::log(eps[i]);
        double y = std::log(std::max(means[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double den = double(n) * sxx - sx * sx;
    if (std::fabs(den) < 1e-14) return 0.0;
    // positive rate when the distance decreases with eps
    return (double(n) * sxy - sx * sy) / den;
}

json rung_json(const LadderRung& r) {
    return json{{"epsilon", r.eps}, {"theta", r.theta}};
}

}  // namespace

json noise_convergence_experiment(const NoiseConvConfig& cfg) {
    json out;
    out["experiment"] = "noise_convergence";
    out["alpha_p"] = cfg.alpha_p;
    out["n_mc"] = cfg.n_mc;
    out["seed0"] = cfg.seed0;
    out["scales"] = cfg.scales;
    out["ladder"] = json::array();
    for (const auto& r : cfg.ladder) out["ladder"].push_back(rung_json(r));
    if (cfg.ladder.size() < 1) {
        out["flag"] = "ladder too short; rate undefined";
        return out;
    }

    std::vector<std::vector<double>> per_rung(cfg.ladder.size(),
                                              std::vector<double>(size_t(cfg.n_mc), 0.0));
    parallel_for(cfg.n_mc, cfg.jobs, [&](int mc) {
        NoiseField master = sample_white(cfg.lat, cfg.j0, cfg.nt, cfg.seed0 + uint64_t(mc));
        for (size_t ri = 0; ri < cfg.ladder.size(); ++ri) {
            NoiseField reg = regularize(master, cfg.ladder[ri].eps, cfg.ladder[ri].theta);
            // difference field on the regularised window
            GridField diff = reg.f;
            for (int j = 0; j < diff.nt; ++j) {
                const double* mslice = master.f.slice_abs(diff.j0 + j);
                double* d = diff.slice(j);
                for (size_t c = 0; c < diff.lat.ncells(); ++c) d[c] -= mslice[c];
            }
            HolderEstimate est = holder_seminorm(diff, cfg.alpha_p, cfg.scales,
                                                 cfg.region_lo, cfg.region_hi);
            per_rung[ri][size_t(mc)] = est.seminorm;
        }
    });

    std::vector<double> epss, means;
    bool decreasing = true;
    out["rungs"] = json::array();
    double prev = 0;
    for (size_t ri = 0; ri < cfg.ladder.size(); ++ri) {
        MeanStderr ms = mean_stderr(per_rung[ri]);
        json rj = rung_json(cfg.ladder[ri]);
        rj["mean_seminorm"] = ms.mean;
        rj["stderr"] = ms.se;
        out["rungs"].push_back(rj);
        if (ri > 0 && !(ms.mean < prev)) decreasing = false;
        prev = ms.mean;
        epss.push_back(cfg.ladder[ri].eps);
        means.push_back(ms.mean);
    }
    out["strictly_decreasing"] = decreasing;
    if (cfg.ladder.size() >= 2)
        out["fitted_rate"] = rate_fit(epss, means);
    else
        out["flag"] = "single rung; rate undefined";
    out["reference"] = "finest-lattice white noise (self-convergence proxy)";
    return out;
}

json kstar_convergence_experiment(const KstarConvConfig& cfg) {
    json out;
    out["experiment"] = "kstar_convergence";
    out["alpha_p"] = cfg.alpha_p;
    out["n_mc"] = cfg.n_mc;
    out["seed0"] = cfg.seed0;
    out["ladder"] = json::array();
    for (const auto& r : cfg.ladder) out["ladder"].push_back(rung_json(r));
    const KernelTable& K = *cfg.K;

    long long j_lo = cfg.t_steps.front(), j_hi = cfg.t_steps.back() + 1;
    K.hat();  // materialize before the worker loop
    std::vector<std::vector<double>> per_rung(cfg.ladder.size(),
                                              std::vector<double>(size_t(cfg.n_mc), 0.0));
    parallel_for(cfg.n_mc, cfg.jobs, [&](int mc) {
        NoiseField master = sample_white(cfg.lat, cfg.j0, cfg.nt, cfg.seed0 + uint64_t(mc));
        GridField kw = kernel_convolve(K, master.f, j_lo, j_hi);
        for (size_t ri = 0; ri < cfg.ladder.size(); ++ri) {
            NoiseField reg = regularize(master, cfg.ladder[ri].eps, cfg.ladder[ri].theta);
            GridField kr = kernel_convolve(K, reg.f, j_lo, j_hi);
            for (size_t i = 0; i < kr.v.size(); ++i) kr.v[i] -= kw.v[i];
            double sup = 0;
            for (long long ts : cfg.t_steps) {
                HolderEstimate est = spatial_holder_seminorm(kr, int(ts - kr.j0),
                                                             cfg.alpha_p, cfg.scales);
                sup = std::max(sup, est.seminorm);
            }
            per_rung[ri][size_t(mc)] = sup;
        }
    });

    std::vector<double> epss, means;
    bool decreasing = true;
    double prev = 0;
    out["rungs"] = json::array();
    for (size_t ri = 0; ri < cfg.ladder.size(); ++ri) {
        MeanStderr ms = mean_stderr(per_rung[ri]);
        json rj = rung_json(cfg.ladder[ri]);
        rj["mean_sup_norm"] = ms.mean;
        rj["stderr"] = ms.se;
        out["rungs"].push_back(rj);
        if (ri > 0 && !(ms.mean < prev)) decreasing = false;
        prev = ms.mean;
        epss.push_back(cfg.ladder[ri].eps);
        means.push_back(ms.mean);
    }
    out["strictly_decreasing"] = decreasing;
    out["fitted_rate"] = rate_fit(epss, means);
    return out;
}

json solution_convergence_experiment(const SolutionConvConfig& cfg) {
    json out;
    out["experiment"] = "solution_convergence";
    out["renorm"] = cfg.renorm;
    out["n_seeds"] = cfg.n_seeds;
    out["seed0"] = cfg.seed0;
    out["t_eval"] = cfg.t_eval;
    out["ic"] = cfg.ic;
    out["ladder"] = json::array();
    for (const auto& r : cfg.ladder) out["ladder"].push_back(rung_json(r));

    const Lattice& lat = cfg.lat;
    long long j_eval = llround(cfg.t_eval / lat.dt);
    size_t R = cfg.ladder.size();

    // counterterm tables per rung (shared across seeds)
    std::vector<CountertermTable> tables(R);
    if (cfg.renorm) {
        for (size_t ri = 0; ri < R; ++ri) {
            WzCov cov(*cfg.K, cfg.ladder[ri].eps, cfg.ladder[ri].theta);
            tables[ri] = compute_counterterms(cov, cfg.t_samples);
        }
        json tj = json::array();
        for (size_t ri = 0; ri < R; ++ri)
            tj.push_back(json{{"epsilon", tables[ri].eps},
                              {"C1_mean", mean_stderr(tables[ri].C1).mean},
                              {"C2_mean", mean_stderr(tables[ri].C2).mean}});
        out["counterterms"] = tj;
    }

    // noise margin: mollifier radius at the coarsest eps
    long long margin = 0;
    for (const auto& r : cfg.ladder) {
        long long jr = llround(r.eps * r.eps / lat.dt) + llround(r.theta / lat.dt) + 4;
        margin = std::max(margin, jr);
    }

    struct SeedOut {
        std::vector<double> dist_to_finest, dist_succ, sup_norm;
        std::vector<bool> ok;
    };
    std::vector<SeedOut> seed_out(size_t(cfg.n_seeds));
    if (cfg.renorm) cfg.K->hat();
    parallel_for(cfg.n_seeds, cfg.jobs, [&](int sd) {
        NoiseField master = sample_white(lat, -margin, int(j_eval + 2 * margin),
                                         cfg.seed0 + uint64_t(sd));
        std::vector<std::vector<double>> finals(R);
        std::vector<bool> ok(R, true);
        for (size_t ri = 0; ri < R; ++ri) {
            NoiseField reg = regularize(master, cfg.ladder[ri].eps, cfg.ladder[ri].theta);
            SolverConfig sc;
            sc.lat = lat;
            sc.t_final = cfg.t_eval;
            sc.renorm = cfg.renorm;
            sc.ic = cfg.ic;
            sc.blowup_cap = cfg.cap;
            Trajectory tr = run(sc, &reg, cfg.renorm ? &tables[ri] : nullptr, {j_eval});
            if (tr.blew_up || tr.snaps.empty()) {
                ok[ri] = false;
                continue;
            }
            finals[ri] = tr.snaps.back();
        }
        double dxd = 1;
        for (int i = 0; i < lat.d; ++i) dxd *= lat.dx();
        auto l2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double acc = 0;
            for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(acc * dxd);
        };
        SeedOut& so = seed_out[size_t(sd)];
        so.dist_to_finest.assign(R, -1.0);
        so.dist_succ.assign(R, -1.0);
        so.sup_norm.assign(R, -1.0);
        so.ok.assign(ok.begin(), ok.end());
        for (size_t ri = 0; ri < R; ++ri) {
            if (!ok[ri]) continue;
            double sup = 0;
            for (double x : finals[ri]) sup = std::max(sup, std::fabs(x));
            so.sup_norm[ri] = sup;
            if (ok[R - 1] && ri + 1 < R) so.dist_to_finest[ri] = l2(finals[ri], finals[R - 1]);
            if (ri + 1 < R && ok[ri + 1]) so.dist_succ[ri] = l2(finals[ri], finals[ri + 1]);
        }
    });
    std::vector<std::vector<double>> dist_to_finest(R), dist_succ(R), sup_norm(R);
    int excluded = 0;
    for (const auto& so : seed_out) {
        for (size_t ri = 0; ri < R; ++ri) {
            if (!so.ok[ri]) { ++excluded; continue; }
            if (so.sup_norm[ri] >= 0) sup_norm[ri].push_back(so.sup_norm[ri]);
            if (so.dist_to_finest[ri] >= 0) dist_to_finest[ri].push_back(so.dist_to_finest[ri]);
            if (so.dist_succ[ri] >= 0) dist_succ[ri].push_back(so.dist_succ[ri]);
        }
    }

    out["excluded_trajectories"] = excluded;
    {
        json ps = json::array();
        for (const auto& so : seed_out) {
            json row;
            row["sup_norm"] = so.sup_norm;
            row["l2_successive"] = so.dist_succ;
            row["l2_to_finest"] = so.dist_to_finest;
            ps.push_back(row);
        }
        out["per_seed"] = ps;
    }
    out["rungs"] = json::array();
    for (size_t ri = 0; ri < R; ++ri) {
        json rj = rung_json(cfg.ladder[ri]);
        MeanStderr sn = mean_stderr(sup_norm[ri]);
        rj["sup_norm_mean"] = sn.mean;
        rj["sup_norm_stderr"] = sn.se;
        if (ri + 1 < R) {
            MeanStderr df = mean_stderr(dist_to_finest[ri]);
            MeanStderr ds = mean_stderr(dist_succ[ri]);
            rj["l2_to_finest_mean"] = df.mean;
            rj["l2_to_finest_stderr"] = df.se;
            rj["l2_successive_mean"] = ds.mean;
            rj["l2_successive_stderr"] = ds.se;
        }
        out["rungs"].push_back(rj);
    }
    if (R >= 3) {
        std::vector<double> epss, means;
        for (size_t ri = 0; ri + 1 < R; ++ri) {
            epss.push_back(cfg.ladder[ri].eps);
            means.push_back(mean_stderr(dist_succ[ri]).mean);
        }
        if (epss.size() >= 2) out["successive_rate"] = rate_fit(epss, means);
    }
    return out;
}

json check_kernel_lemmas(const KernelLemmaConfig& cfg) {
    const KernelTable& K = *cfg.K;
    const Lattice& lat = K.lat;
    size_t nc = lat.ncells();
    json out;
    out["experiment"] = "kernel_lemmas";
    out["delta"] = cfg.delta;
    out["theta_exp"] = cfg.theta_exp;
    out["note"] = "sup ratios of |lhs| / rhs with C = 1; degenerate pairs z = zbar excluded";
    double zeta = -double(lat.d);

    json items = json::array();
    for (const auto& rung : cfg.ladder) {
        json item = rung_json(rung);
        WzCov cov(K, rung.eps, rung.theta);

        // Lemma 4.1: |K * rho2_eps(z)| <= C t^{-delta/2} ||z||^{zeta+delta}
        {
            const Mollifier& mo = cov.mollifier();
            double sup = 0;
            for (int s = 1; s < K.nsl; s = std::max(s + 1, s * 2)) {
                auto kh = spatial_fft(K.slice(s), lat.d, lat.n);
                for (size_t c = 0; c < nc; ++c) kh[c] *= mo.rho2_hat[c].real();
                std::vector<double> conv(nc);
                spatial_ifft(std::move(kh), lat.d, lat.n, conv.data());
                double t = s * lat.dt;
                for (size_t c = 0; c < nc; c += 3) {
                    double pn = parabolic_norm(lat, t, c);
                    if (pn < 4 * lat.dx()) continue;
                    double rhs = std::pow(t, -cfg.delta / 2) *
                                 std::pow(pn, zeta + cfg.delta);
                    double ratio = std::fabs(conv[c]) / rhs;
                    sup = std::max(sup, ratio);
                }
            }
            item["lemma_4_1_sup_ratio"] = sup;
        }

        // sampled off-diagonal pairs for (4.2), (4.9), (4.11)
        double sup42 = 0, sup43 = 0, sup45 = 0;
        long long j = llround(0.75 * (K.nsl - 1));
        for (int p = 0; p < cfg.n_pairs; ++p) {
            uint64_t h = counter_hash(cfg.seed, 1, p, 0, 0);
            long long jbar = j - 1 - (long long)(h % uint64_t(K.nsl - 2));
            size_t cell = size_t(counter_hash(cfg.seed, 2, p, 0, 0) % nc);
            double pn = parabolic_norm(lat, double(j - jbar) * lat.dt, cell);
            if (pn < 4 * lat.dx()) continue;
            std::vector<double> f = cov.f_field(j, jbar);
            double fv = f[cell];
            sup42 = std::max(sup42, std::fabs(fv) * std::pow(pn, 1 + cfg.delta));
            std::vector<double> kk = cov.kk_field(j, jbar);
            double rhs43 = (std::pow(rung.theta, cfg.theta_exp) +
                            std::pow(rung.eps, 2 * cfg.theta_exp)) *
                           std::pow(pn, -1 - 2 * cfg.theta_exp - cfg.delta);
            sup43 = std::max(sup43, std::fabs(fv - kk[cell]) / rhs43);

            // Lemma 4.5: perturb zbar by one cell in the first axis
            size_t stride = 1;
            for (int i = lat.d - 1; i > 0; --i) stride *= size_t(lat.n);
            size_t cell2 = (cell + stride) % nc;
            double fv2 = f[cell2];
            double pn2 = parabolic_norm(lat, double(j - jbar) * lat.dt, cell2);
            double sep = lat.dx();
            double rhs45 = std::pow(sep, cfg.delta) *
                           (std::pow(pn, -1 - 2 * cfg.delta) +
                            std::pow(pn2, -1 - 2 * cfg.delta));
            sup45 = std::max(sup45, std::fabs(fv - fv2) / rhs45);
        }
        item["lemma_4_2_sup_ratio"] = sup42;
        item["lemma_4_3_sup_ratio"] = sup43;
        item["lemma_4_5_sup_ratio"] = sup45;
        items.push_back(item);
    }
    out["ladder"] = items;

    // growth flags across the ladder
    auto flag_growth = [&](const std::string& key) {
        double first = out["ladder"].front()[key].get<double>();
        double last = out["ladder"].back()[key].get<double>();
        return last > 4.0 * first + 1e-12;
    };
    if (cfg.ladder.size() >= 2) {
        out["lemma_4_2_growth_flag"] = flag_growth("lemma_4_2_sup_ratio");
        out["lemma_4_3_growth_flag"] = flag_growth("lemma_4_3_sup_ratio");
    }
    return out;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_json: cannot open " + path);
    os << j.dump(2) << "\n";
}

}  // namespace wz
