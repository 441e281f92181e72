#include "defects/battery.hpp"

#include <cstdio>
#include <random>

namespace defects {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string Battery::hash_hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

Battery make_battery(int n, int degree, const Box& box, std::uint64_t seed, BatteryOptions opts) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> rad(opts.radius_lo, opts.radius_hi);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);

    Battery out;
    std::vector<double> trace;  // hashed generating parameters
    trace.push_back(double(n));
    trace.push_back(double(degree));
    trace.push_back(double(seed));

    const double half = 0.5 * box.max_extent();

    for (int f = 0; f < opts.count; ++f) {
        Vec center = box.center();
        for (int i = 0; i < n; ++i) center[i] += opts.center_jitter * box.extent(i) * unit(rng);
        double radius = rad(rng) * half;
        // keep the closed support strictly inside the box
        for (int i = 0; i < n; ++i) {
            double room = std::min(center[i] - box.lo[i], box.hi[i] - center[i]);
            radius = std::min(radius, 0.98 * room);
        }
        std::vector<std::pair<MultiIndex, Polynomial>> parts;
        for (const auto& mu : index_set(n, degree)) {
            Polynomial p;
            p.n = n;
            p.terms.push_back({coef(rng), {0, 0, 0, 0}});
            for (int d = 0; d < opts.poly_degree; ++d) {
                Polynomial::Term t{0.6 * coef(rng), {0, 0, 0, 0}};
                t.exp[static_cast<std::size_t>(int(rng() % static_cast<std::uint64_t>(n)))] = 1;
                p.terms.push_back(t);
            }
            parts.emplace_back(mu, p);
            for (const auto& term : p.terms) {
                trace.push_back(term.coef);
                for (int e : term.exp) trace.push_back(double(e));
            }
        }
        trace.push_back(radius);
        for (int i = 0; i < n; ++i) trace.push_back(center[i]);
        out.forms.push_back(test_form(n, degree, box, center, radius, parts));
    }
    out.hash = fnv1a(trace.data(), trace.size() * sizeof(double));
    return out;
}

}  // namespace defects
