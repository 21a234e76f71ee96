#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/path.hpp"
#include "levytree/rational.hpp"

namespace levytree {

// A total map from finite paths to reals; the test batteries that stand in for
// the measurable functions F and Phi of the invariance statements.
struct FunctionalSpec {
    enum class Kind { EvalAt, Sup, Area, Duration, TripletComponent };

    Kind kind = Kind::Sup;
    double fraction = 0.0;  // EvalAt
    int component = 0;      // TripletComponent

    static FunctionalSpec eval_at(double f) { return {Kind::EvalAt, f, 0}; }
    static FunctionalSpec sup() { return {Kind::Sup, 0.0, 0}; }
    static FunctionalSpec area() { return {Kind::Area, 0.0, 0}; }
    static FunctionalSpec duration() { return {Kind::Duration, 0.0, 0}; }
    static FunctionalSpec triplet_component(int i) { return {Kind::TripletComponent, 0.0, i}; }

    std::string name() const {
        switch (kind) {
            case Kind::EvalAt: {
                std::string s = std::to_string(fraction);
                s.erase(s.find_last_not_of('0') + 1);
                if (!s.empty() && s.back() == '.') s.pop_back();
                return "eval_at(" + s + ")";
            }
            case Kind::Sup: return "sup";
            case Kind::Area: return "area";
            case Kind::Duration: return "duration";
            case Kind::TripletComponent: return "triplet_component(" + std::to_string(component) + ")";
        }
        return "?";
    }

    double apply(const FinitePath& w) const {
        switch (kind) {
            case Kind::EvalAt:
                return w.eval(fraction * w.lifetime());
            case Kind::Sup: {
                double m = w[0];
                for (std::size_t i = 1; i < w.size(); ++i) m = std::max(m, w[i]);
                return m;
            }
            case Kind::Area: {
                double s = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) s += w[i];
                s -= 0.5 * (w.front() + w.back());
                return s * w.step();
            }
            case Kind::Duration:
                return w.lifetime();
            case Kind::TripletComponent:
                throw DomainError("triplet_component applies to triplets, not paths");
        }
        return 0.0;
    }
};

// The default battery: separates laws effectively at low cost, Bonferroni m = 6.
inline std::vector<FunctionalSpec> default_battery() {
    return {FunctionalSpec::eval_at(0.25), FunctionalSpec::eval_at(0.5),
            FunctionalSpec::eval_at(0.75), FunctionalSpec::sup(), FunctionalSpec::area(),
            FunctionalSpec::duration()};
}

// Rational-valued functionals on lattice paths for the exact enumeration
// identity; these may depend on the re-rooting time s.
struct RationalFunctional {
    enum class Kind { Area, Sup, EvalQuarter, EvalMid, HeightAtS, STimesSup };
    Kind kind;

    std::string name() const {
        switch (kind) {
            case Kind::Area: return "area";
            case Kind::Sup: return "sup";
            case Kind::EvalQuarter: return "eval_at(0.25)";
            case Kind::EvalMid: return "eval_at(0.5)";
            case Kind::HeightAtS: return "height_at_s";
            case Kind::STimesSup: return "s_times_sup";
        }
        return "?";
    }

    // Linear interpolation of integer samples at a rational position.
    static Rat eval_rat(const LatticePath& p, const Rat& pos) {
        const std::int64_t i = pos.num() / pos.den();  // pos >= 0
        const Rat frac = pos - Rat(i);
        if (frac == Rat(0)) return Rat(p[static_cast<std::size_t>(i)]);
        return Rat(p[static_cast<std::size_t>(i)]) * (Rat(1) - frac) +
               Rat(p[static_cast<std::size_t>(i) + 1]) * frac;
    }

    Rat apply(std::size_t s, const LatticePath& p) const {
        const std::size_t len = p.size() - 1;  // 2n
        switch (kind) {
            case Kind::Area: {
                std::int64_t twice = 0;
                for (std::size_t i = 0; i + 1 < p.size(); ++i) twice += p[i] + p[i + 1];
                return Rat(twice, 2);
            }
            case Kind::Sup: {
                std::int64_t m = 0;
                for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, p[i]);
                return Rat(m);
            }
            case Kind::EvalQuarter:
                return eval_rat(p, Rat(static_cast<std::int64_t>(len), 4));
            case Kind::EvalMid:
                return eval_rat(p, Rat(static_cast<std::int64_t>(len), 2));
            case Kind::HeightAtS:
                return Rat(p[std::min(s, len)]);
            case Kind::STimesSup: {
                std::int64_t m = 0;
                for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, p[i]);
                return Rat(static_cast<std::int64_t>(s)) * Rat(m);
            }
        }
        return Rat(0);
    }
};

inline std::vector<RationalFunctional> reroot_sum_battery() {
    using K = RationalFunctional::Kind;
    return {{K::Area}, {K::Sup}, {K::EvalQuarter}, {K::EvalMid}, {K::HeightAtS}, {K::STimesSup}};
}

}  // namespace levytree
