#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "levytree/errors.hpp"

namespace levytree {

// A continuous path w : [0, zeta] -> R stored by its values on a uniform grid
// and read back by piecewise-linear interpolation. All transforms below stay on
// the grid, so minima over intervals are exactly computable.
class FinitePath {
public:
    FinitePath() : samples_{0.0}, step_(1.0) {}

    FinitePath(std::vector<double> samples, double step)
        : samples_(std::move(samples)), step_(step) {
        if (samples_.empty()) throw InputError("FinitePath: need at least one sample");
        if (!(step_ > 0.0)) throw InputError("FinitePath: grid step must be positive");
    }

    std::size_t size() const { return samples_.size(); }
    std::size_t segments() const { return samples_.size() - 1; }
    double step() const { return step_; }
    double lifetime() const { return static_cast<double>(samples_.size() - 1) * step_; }
    double operator[](std::size_t i) const { return samples_[i]; }
    double front() const { return samples_.front(); }
    double back() const { return samples_.back(); }
    const std::vector<double>& samples() const { return samples_; }

    // Fractional grid coordinate of t, snapped when t is within 1e-9 cells of a
    // grid point so that grid times evaluate to exact sample values.
    double grid_coord(double t) const {
        const double u = t / step_;
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9 && r >= 0.0 && r <= static_cast<double>(segments()))
            return r;
        return u;
    }

    // Exact grid index of t, or PrecisionError when t is off the grid.
    std::size_t grid_index(double t) const {
        const double u = grid_coord(t);
        const double r = std::round(u);
        if (u != r) throw PrecisionError("time is not on the sample grid");
        if (r < 0.0 || r > static_cast<double>(segments()))
            throw DomainError("time outside [0, lifetime]");
        return static_cast<std::size_t>(r);
    }

    double eval(double t) const {
        const double u = grid_coord(t);
        if (u < 0.0 || u > static_cast<double>(segments()))
            throw DomainError("eval: time outside [0, lifetime]");
        const double fl = std::floor(u);
        const std::size_t i = static_cast<std::size_t>(fl);
        const double frac = u - fl;
        if (frac == 0.0) return samples_[i];
        return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
    }

    // min over [a, b]; attained at interior grid points or at the interpolated ends.
    double range_min(double a, double b) const {
        if (a > b) throw DomainError("range_min: a > b");
        const double ua = grid_coord(a);
        const double ub = grid_coord(b);
        if (ua < 0.0 || ub > static_cast<double>(segments()))
            throw DomainError("range_min: interval outside [0, lifetime]");
        double m = std::min(eval(a), eval(b));
        const std::size_t ia = static_cast<std::size_t>(std::ceil(ua));
        const std::size_t ib = static_cast<std::size_t>(std::floor(ub));
        for (std::size_t i = ia; i <= ib && i < samples_.size(); ++i)
            m = std::min(m, samples_[i]);
        return m;
    }

private:
    std::vector<double> samples_;
    double step_;
};

// w-bar: time reversal, same lifetime.
inline FinitePath reverse(const FinitePath& w) {
    std::vector<double> s(w.samples().rbegin(), w.samples().rend());
    return FinitePath(std::move(s), w.step());
}

// w-tilde: w(0) + w(t) - 2 min_{[0,t]} w, evaluated on the grid.
inline FinitePath tilde(const FinitePath& w) {
    std::vector<double> out(w.size());
    double runmin = w[0];
    for (std::size_t i = 0; i < w.size(); ++i) {
        runmin = std::min(runmin, w[i]);
        out[i] = w[0] + w[i] - 2.0 * runmin;
    }
    return FinitePath(std::move(out), w.step());
}

// An excursion: H(0) = H(sigma) = 0, H >= 0. Codes the real tree T_H.
class ContourExcursion {
public:
    ContourExcursion() = default;

    explicit ContourExcursion(FinitePath path) : path_(std::move(path)) {
        if (path_.front() != 0.0 || path_.back() != 0.0)
            throw InputError("ContourExcursion: endpoints must be exactly 0");
        for (std::size_t i = 0; i < path_.size(); ++i)
            if (path_[i] < 0.0) throw InputError("ContourExcursion: negative height");
    }

    ContourExcursion(std::vector<double> samples, double step)
        : ContourExcursion(FinitePath(std::move(samples), step)) {}

    const FinitePath& path() const { return path_; }
    double sigma() const { return path_.lifetime(); }
    double step() const { return path_.step(); }
    std::size_t size() const { return path_.size(); }
    double operator[](std::size_t i) const { return path_[i]; }

private:
    FinitePath path_;
};

// d_H(s,t) = H_s + H_t - 2 min_{[s^t, svt]} H, the distance between p_H(s) and p_H(t).
inline double tree_distance(const ContourExcursion& H, double s, double t) {
    if (s > t) std::swap(s, t);
    return H.path().eval(s) + H.path().eval(t) - 2.0 * H.path().range_min(s, t);
}

// H^[s] on the same grid: the contour of T_H re-read from the vertex visited at
// time s. Forward part d_H(s, s+t), wrapped part d_H(s, s+t-sigma); both are
// running-min recursions, so the output is exact in the sample arithmetic.
inline ContourExcursion reroot_at(const ContourExcursion& H, std::size_t k) {
    const std::size_t m = H.size() - 1;
    if (k > m) throw DomainError("reroot: grid index outside [0, sigma]");
    std::vector<double> out(m + 1);
    const double hk = H[k];
    out[0] = 0.0;
    double runmin = hk;
    for (std::size_t j = 1; j <= m - k; ++j) {
        runmin = std::min(runmin, H[k + j]);
        out[j] = hk + H[k + j] - 2.0 * runmin;
    }
    runmin = hk;
    for (std::size_t j = m; j > m - k; --j) {
        const std::size_t i = k + j - m;
        runmin = std::min(runmin, H[i]);
        out[j] = hk + H[i] - 2.0 * runmin;
    }
    out[m] = 0.0;
    return ContourExcursion(std::move(out), H.step());
}

inline ContourExcursion reroot(const ContourExcursion& H, double s) {
    return reroot_at(H, H.path().grid_index(s));
}

// (H^{+,s}, H^{-,s}): the path read forward from s and the path read backward
// from s; both start at H_s.
inline std::pair<FinitePath, FinitePath> split(const ContourExcursion& H, double s) {
    const std::size_t k = H.path().grid_index(s);
    const auto& v = H.path().samples();
    std::vector<double> fwd(v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    std::vector<double> bwd(v.rend() - static_cast<std::ptrdiff_t>(k) - 1, v.rend());
    return {FinitePath(std::move(fwd), H.step()), FinitePath(std::move(bwd), H.step())};
}

// Integer path on the unit grid; the exact-arithmetic carrier for the
// enumeration suites.
struct LatticePath {
    std::vector<std::int64_t> heights;

    std::size_t size() const { return heights.size(); }
    std::int64_t operator[](std::size_t i) const { return heights[i]; }
    bool operator==(const LatticePath& o) const { return heights == o.heights; }

    FinitePath to_finite() const {
        return FinitePath(std::vector<double>(heights.begin(), heights.end()), 1.0);
    }
    ContourExcursion to_excursion() const {
        return ContourExcursion(to_finite());
    }
};

inline bool is_dyck(const LatticePath& p) {
    if (p.heights.empty()) return false;
    if (p.heights.front() != 0 || p.heights.back() != 0) return false;
    for (std::size_t i = 0; i < p.heights.size(); ++i) {
        if (p.heights[i] < 0) return false;
        if (i + 1 < p.heights.size()) {
            const std::int64_t d = p.heights[i + 1] - p.heights[i];
            if (d != 1 && d != -1) return false;
        }
    }
    return true;
}

inline LatticePath lat_reverse(const LatticePath& p) {
    return LatticePath{{p.heights.rbegin(), p.heights.rend()}};
}

inline LatticePath lat_tilde(const LatticePath& p) {
    LatticePath out;
    out.heights.resize(p.size());
    std::int64_t runmin = p[0];
    for (std::size_t i = 0; i < p.size(); ++i) {
        runmin = std::min(runmin, p[i]);
        out.heights[i] = p[0] + p[i] - 2 * runmin;
    }
    return out;
}

// Exact-integer re-rooting of a lattice excursion (same recursion as reroot_at).
inline LatticePath lat_reroot(const LatticePath& p, std::size_t k) {
    const std::size_t m = p.size() - 1;
    if (k > m) throw DomainError("lat_reroot: index outside path");
    LatticePath out;
    out.heights.assign(m + 1, 0);
    const std::int64_t hk = p[k];
    std::int64_t runmin = hk;
    for (std::size_t j = 1; j <= m - k; ++j) {
        runmin = std::min(runmin, p[k + j]);
        out.heights[j] = hk + p[k + j] - 2 * runmin;
    }
    runmin = hk;
    for (std::size_t j = m; j > m - k; --j) {
        const std::size_t i = k + j - m;
        runmin = std::min(runmin, p[i]);
        out.heights[j] = hk + p[i] - 2 * runmin;
    }
    out.heights[m] = 0;
    return out;
}

inline std::int64_t lat_range_min(const LatticePath& p, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (b >= p.size()) throw DomainError("lat_range_min: index outside path");
    std::int64_t m = p[a];
    for (std::size_t i = a + 1; i <= b; ++i) m = std::min(m, p[i]);
    return m;
}

inline std::int64_t lat_tree_distance(const LatticePath& p, std::size_t s, std::size_t t) {
    return p[s] + p[t] - 2 * lat_range_min(p, s, t);
}

}  // namespace levytree
