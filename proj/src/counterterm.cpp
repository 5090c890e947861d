#include "wz/counterterm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wz {

namespace {
long long pmod(long long a, long long m) { return ((a % m) + m) % m; }
}  // namespace

double CountertermTable::c1_at_step(long long j) const {
    long long r = pmod(j, m);
    // locate the sample bracket (j_off sorted, periodic)
    size_t n = j_off.size();
    if (n == 1) return C1[0];
    for (size_t i = 0; i < n; ++i) {
        long long a = j_off[i];
        long long b = (i + 1 < n) ? j_off[i + 1] : j_off[0] + m;
        long long rr = (r < a) ? r + m : r;
        if (rr >= a && rr < b) {
            double w = double(rr - a) / double(b - a);
            double c1b = (i + 1 < n) ? C1[i + 1] : C1[0];
            return (1 - w) * C1[i] + w * c1b;
        }
    }
    return C1[0];
}

double CountertermTable::c_at_step(long long j) const {
    long long r = pmod(j, m);
    size_t n = j_off.size();
    auto cval = [&](size_t i) { return 3.0 * C1[i] - 9.0 * C2[i]; };
    if (n == 1) return cval(0);
    for (size_t i = 0; i < n; ++i) {
        long long a = j_off[i];
        long long b = (i + 1 < n) ? j_off[i + 1] : j_off[0] + m;
        long long rr = (r < a) ? r + m : r;
        if (rr >= a && rr < b) {
            double w = double(rr - a) / double(b - a);
            double cb = (i + 1 < n) ? cval(i + 1) : cval(0);
            return (1 - w) * cval(i) + w * cb;
        }
    }
    return cval(0);
}

void CountertermTable::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("CountertermTable: cannot open " + path);
    os.precision(17);
    os << "epsilon,theta,t,C1,C2,c\n";
    for (size_t i = 0; i < j_off.size(); ++i)
        os << eps << "," << theta << "," << double(j_off[i]) * theta / double(m) << ","
           << C1[i] << "," << C2[i] << "," << (3.0 * C1[i] - 9.0 * C2[i]) << "\n";
}

CountertermTable compute_counterterms(const WzCov& cov, int t_samples, bool with_c2) {
    if (t_samples < 1) throw std::invalid_argument("compute_counterterms: t_samples >= 1");
    CountertermTable tab;
    tab.eps = cov.eps();
    tab.theta = cov.theta();
    tab.m = cov.block_steps();
    long long ts = std::min<long long>(t_samples, tab.m);
    for (long long i = 0; i < ts; ++i) tab.j_off.push_back(i * tab.m / ts);
    for (long long j : tab.j_off) {
        tab.C1.push_back(cov.C1(j));
        tab.C2.push_back(with_c2 ? cov.C2(j) : 0.0);
    }
    return tab;
}

double fit_log_slope(const std::vector<double>& eps, const std::vector<double>& val) {
    if (eps.size() != val.size() || eps.size() < 3)
        throw std::invalid_argument("fit_log_slope: need at least 3 ladder points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = eps.size();
    for (size_t i = 0; i < n; ++i) {
        double x = std::log(eps[i]);
        double y = std::log(std::fabs(val[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = double(n) * sxx - sx * sx;
    if (std::fabs(denom) < 1e-14) return 0.0;
    return (double(n) * sxy - sx * sy) / denom;
}

std::vector<double> halving_increments(const std::vector<double>& val) {
    std::vector<double> out;
    for (size_t i = 0; i + 1 < val.size(); ++i) out.push_back(val[i + 1] - val[i]);
    return out;
}

}  // namespace wz
