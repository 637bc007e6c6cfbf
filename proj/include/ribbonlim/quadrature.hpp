#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ribbonlim {

// Composite Gauss-Legendre rule on [0, 1]: `panels` equal panels with
// `nodes_per_panel` nodes each.
struct QuadratureScheme {
    int panels = 16;
    int nodes_per_panel = 8;

    QuadratureScheme() = default;
    QuadratureScheme(int p, int n) : panels(p), nodes_per_panel(n) { validate(); }

    void validate() const {
        if (panels < 1) throw std::invalid_argument("quadrature panels must be >= 1");
        if (nodes_per_panel < 4 || nodes_per_panel > 32)
            throw std::invalid_argument("nodes_per_panel must be in [4, 32]");
    }

    int total_nodes() const { return panels * nodes_per_panel; }
};

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum to 2
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(rule));
    (void)inserted;
    return pos->second;
}

struct QuadratureNode {
    double t;
    double weight;
};

// Nodes of the composite rule on [0, 1]. Optional breakpoints split the
// interval first; each sub-interval gets at least one panel, the rest are
// distributed proportionally to length. Ordering is strictly increasing in t.
inline std::vector<QuadratureNode> scheme_nodes(const QuadratureScheme& scheme,
                                                const std::vector<double>& breakpoints = {}) {
    scheme.validate();
    std::vector<double> edges;
    edges.push_back(0.0);
    for (double b : breakpoints) {
        if (b > 1e-12 && b < 1.0 - 1e-12) edges.push_back(b);
    }
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());

    const int segments = static_cast<int>(edges.size()) - 1;
    std::vector<int> panels_per_segment(segments, 1);
    int remaining = scheme.panels > segments ? scheme.panels - segments : 0;
    for (int s = 0; s < segments && remaining > 0; ++s) {
        int extra = static_cast<int>(std::round(remaining * (edges[s + 1] - edges[s])));
        panels_per_segment[s] += std::min(extra, remaining);
    }

    const GaussRule& rule = gauss_legendre(scheme.nodes_per_panel);
    std::vector<QuadratureNode> nodes;
    for (int s = 0; s < segments; ++s) {
        const double a = edges[s];
        const double width = (edges[s + 1] - edges[s]) / panels_per_segment[s];
        for (int p = 0; p < panels_per_segment[s]; ++p) {
            const double lo = a + p * width;
            for (int k = 0; k < scheme.nodes_per_panel; ++k) {
                nodes.push_back({lo + 0.5 * (rule.nodes[k] + 1.0) * width,
                                 0.5 * rule.weights[k] * width});
            }
        }
    }
    return nodes;
}

// Gauss-Legendre integral of f over [a, b] with a single n-node panel.
template <class F>
double integrate_panel(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return sum * half;
}

} // namespace ribbonlim
