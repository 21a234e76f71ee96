#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/path.hpp"
#include "levytree/rmq.hpp"
#include "levytree/rng.hpp"

namespace levytree {

// d_H with a precomputed sparse range-minimum table; use when a path is queried
// many times. Queries at grid times are exact; general times interpolate the
// two boundary cells.
class ContourMetric {
public:
    explicit ContourMetric(const ContourExcursion& H) : H_(&H), table_(H.path().samples()) {}

    double min_between(double a, double b) const {
        if (a > b) std::swap(a, b);
        const auto& p = H_->path();
        double m = std::min(p.eval(a), p.eval(b));
        const double ua = p.grid_coord(a);
        const double ub = p.grid_coord(b);
        const std::size_t ia = static_cast<std::size_t>(std::ceil(ua));
        const std::size_t ib = static_cast<std::size_t>(std::floor(std::min(
            ub, static_cast<double>(p.segments()))));
        if (ia <= ib) m = std::min(m, table_.min(ia, ib));
        return m;
    }

    double distance(double s, double t) const {
        return H_->path().eval(s) + H_->path().eval(t) - 2.0 * min_between(s, t);
    }

    const ContourExcursion& excursion() const { return *H_; }

private:
    const ContourExcursion* H_;
    MinSparseTable<double> table_;
};

// s ~_H t iff H_s = H_t = min over [s^t, svt], i.e. d_H(s,t) = 0.
inline bool equivalent(const ContourExcursion& H, double s, double t, double tol = 1e-12) {
    return tree_distance(H, s, t) <= tol;
}

struct DistanceMatrix {
    std::vector<std::vector<double>> d;

    std::size_t size() const { return d.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i][j]; }

    double max_abs_diff(const DistanceMatrix& o) const {
        double m = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                m = std::max(m, std::abs(d[i][j] - o.d[i][j]));
        return m;
    }
};

inline DistanceMatrix distance_matrix(const ContourExcursion& H, const std::vector<double>& times) {
    for (double t : times)
        if (t < 0.0 || H.path().grid_coord(t) > static_cast<double>(H.path().segments()))
            throw DomainError("distance_matrix: time outside [0, sigma]");
    ContourMetric metric(H);
    DistanceMatrix out;
    out.d.assign(times.size(), std::vector<double>(times.size(), 0.0));
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i + 1; j < times.size(); ++j)
            out.d[i][j] = out.d[j][i] = metric.distance(times[i], times[j]);
    return out;
}

// Finite real tree spanned by the root and p sampled vertices. Vertex 0 is the
// root (label 0); sampled vertices carry labels 1..p; branch points are
// unlabeled (label < 0).
struct SpannedTree {
    struct Vertex {
        int label = -1;          // -1 = unlabeled branch point
        int parent = -1;         // -1 for the root
        double edge_length = 0;  // to parent
        double height = 0;       // distance from the root
        double time = 0;         // a representative time, for diagnostics
    };
    std::vector<Vertex> vertices;

    int find_label(int label) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].label == label) return static_cast<int>(i);
        throw DomainError("SpannedTree: no vertex with that label");
    }

    // Distance through the tree between two labeled vertices.
    double label_distance(int la, int lb) const {
        int a = find_label(la), b = find_label(lb);
        std::vector<int> pa;
        for (int v = a; v != -1; v = vertices[static_cast<std::size_t>(v)].parent) pa.push_back(v);
        const double ha = vertices[static_cast<std::size_t>(a)].height;
        const double hb = vertices[static_cast<std::size_t>(b)].height;
        for (int v = b; v != -1; v = vertices[static_cast<std::size_t>(v)].parent)
            if (std::find(pa.begin(), pa.end(), v) != pa.end())
                return ha + hb - 2.0 * vertices[static_cast<std::size_t>(v)].height;
        throw InputError("SpannedTree: disconnected");
    }
};

// Contour-decomposition construction: insert vertices in time order; each new
// vertex branches off the right spine at height m_H(previous time, new time).
// Zero-length attachments onto an unlabeled branch point (or the root) are
// contracted into that vertex.
inline SpannedTree spanned_subtree(const ContourExcursion& H, const std::vector<double>& times) {
    if (times.empty()) throw DomainError("spanned_subtree: need at least one time");
    ContourMetric metric(H);

    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

    SpannedTree tree;
    tree.vertices.push_back({0, -1, 0.0, 0.0, 0.0});  // root
    std::vector<int> spine{0};
    double prev_time = 0.0;

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const double t = times[order[oi]];
        const double h = H.path().eval(t);
        const double m = oi == 0 ? metric.min_between(0.0, t) : metric.min_between(prev_time, t);
        prev_time = t;

        int above = -1;
        while (spine.size() > 1 &&
               tree.vertices[static_cast<std::size_t>(spine.back())].height > m) {
            above = spine.back();
            spine.pop_back();
        }
        int branch = spine.back();
        double bh = tree.vertices[static_cast<std::size_t>(branch)].height;

        if (bh < m) {
            // The attachment point sits strictly inside the edge (branch -> above):
            // insert an unlabeled branch vertex at height m.
            tree.vertices.push_back({-1, branch, m - bh, m, t});
            const int split = static_cast<int>(tree.vertices.size()) - 1;
            auto& av = tree.vertices[static_cast<std::size_t>(above)];
            av.parent = split;
            av.edge_length = av.height - m;
            spine.push_back(split);
            branch = split;
            bh = m;
        }

        const int label = static_cast<int>(order[oi]) + 1;
        if (h == bh && tree.vertices[static_cast<std::size_t>(branch)].label < 0) {
            tree.vertices[static_cast<std::size_t>(branch)].label = label;
            tree.vertices[static_cast<std::size_t>(branch)].time = t;
            continue;
        }
        tree.vertices.push_back({label, branch, h - bh, h, t});
        spine.push_back(static_cast<int>(tree.vertices.size()) - 1);
    }
    return tree;
}

// p independent uniform draws on [0, sigma], snapped to the nearest grid point
// (indices 0 and sigma are the same tree point, so snapping keeps the draw
// uniform over grid classes).
inline std::vector<double> mass_sample(const ContourExcursion& H, CounterRng& rng, std::size_t p) {
    if (p == 0) throw DomainError("mass_sample: p must be >= 1");
    const double m = static_cast<double>(H.path().segments());
    std::vector<double> out(p);
    for (std::size_t i = 0; i < p; ++i)
        out[i] = std::round(rng.uniform() * m) * H.step();
    return out;
}

// (H_u - m, H_u' - m, m) with m = min of H between u and u'.
struct Triplet {
    double a, b, c;
};

inline Triplet triplet(const ContourExcursion& H, double u, double v) {
    const double m = H.path().range_min(std::min(u, v), std::max(u, v));
    return {H.path().eval(u) - m, H.path().eval(v) - m, m};
}

// Distance matrices of H^[s] at `times` and of H at the shifted times agree:
// T_{H^[s]} is T_H re-rooted at p_H(s).
inline bool isometry_check(const ContourExcursion& H, double s, const std::vector<double>& times,
                           double tol = 1e-12) {
    const ContourExcursion R = reroot(H, s);
    const double sigma = H.sigma();
    std::vector<double> shifted(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double st = s + times[i];
        if (st > sigma) st -= sigma;
        shifted[i] = st;
    }
    const DistanceMatrix a = distance_matrix(R, times);
    const DistanceMatrix b = distance_matrix(H, shifted);
    return a.max_abs_diff(b) <= tol;
}

}  // namespace levytree
