#include "ising/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace ising {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1, p1 = 0;
        for (int j = 1; j <= n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::make_pair(x, w)).first->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const auto& [x, w] = gauss_legendre(n);
    double h = 0.5 * (b - a), c = 0.5 * (b + a), s = 0;
    for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
}

double graded_integrate_0pi(const std::function<double(double)>& f, double freq, int n, int levels) {
    double total = 0;
    double hi = M_PI;
    for (int l = 0; l < levels; ++l) {
        double lo = l + 1 == levels ? 0.0 : hi / 2;
        int panels = 1 + static_cast<int>((hi - lo) * std::abs(freq) / 6.0);
        double step = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) total += gl_integrate(f, lo + p * step, lo + (p + 1) * step, n);
        hi = lo;
    }
    return total;
}

double eta_weight_closed(double D, double a, double b) {
    if (std::isinf(b)) return std::exp(-a * D) / D;
    return -std::exp(-a * D) * std::expm1(-(b - a) * D) / D;
}

double eta_weight_gl(double D, double a, double b, int n) {
    const auto& [x, w] = gauss_legendre(n);
    // panels over which exp(-eta D) drops by at most e^-8; integrand below e^-60 of its start is dropped
    double hi = a + 60.0 / D;
    if (!std::isinf(b)) hi = std::min(hi, b);
    int panels = std::max(1, static_cast<int>(std::ceil((hi - a) * D / 8.0)));
    double step = (hi - a) / panels, total = 0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * step, c = lo + 0.5 * step, h = 0.5 * step, s = 0;
        for (int i = 0; i < n; ++i) s += w[i] * std::exp(-(c + h * x[i]) * D);
        total += s * h;
    }
    return total;
}

}  // namespace ising
