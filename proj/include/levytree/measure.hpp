#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "levytree/errors.hpp"

namespace levytree {

// Element of M_f*: a finite measure on R+ whose support is exactly [0, S(mu)],
// represented as contiguous strictly-positive drift segments covering [0, S]
// plus finitely many atoms inside [0, S]. The zero measure is the empty
// representation with S = 0; an atom-only measure is legal only at S = 0.
class FiniteMeasure {
public:
    struct Drift {
        double from, to, rate;
        bool operator==(const Drift& o) const {
            return from == o.from && to == o.to && rate == o.rate;
        }
    };
    struct Atom {
        double pos, mass;
        bool operator==(const Atom& o) const { return pos == o.pos && mass == o.mass; }
    };

    FiniteMeasure() = default;  // zero measure

    FiniteMeasure(std::vector<Drift> drift, std::vector<Atom> atoms)
        : drift_(std::move(drift)), atoms_(std::move(atoms)) {
        normalize();
        validate();
    }

    static FiniteMeasure lebesgue(double a) {
        if (a < 0.0) throw DomainError("lebesgue: negative length");
        if (a == 0.0) return FiniteMeasure();
        return FiniteMeasure({{0.0, a, 1.0}}, {});
    }

    static FiniteMeasure atom_at_zero(double mass) {
        if (!(mass > 0.0)) throw DomainError("atom_at_zero: mass must be positive");
        return FiniteMeasure({}, {{0.0, mass}});
    }

    bool is_zero() const { return drift_.empty() && atoms_.empty(); }

    double sup_support() const { return drift_.empty() ? 0.0 : drift_.back().to; }

    double total_mass() const {
        double m = 0.0;
        for (const auto& d : drift_) m += d.rate * (d.to - d.from);
        for (const auto& a : atoms_) m += a.mass;
        return m;
    }

    // mu([0, x])
    double cdf(double x) const {
        if (x < 0.0) return 0.0;
        double m = 0.0;
        for (const auto& d : drift_)
            if (x > d.from) m += d.rate * (std::min(x, d.to) - d.from);
        for (const auto& a : atoms_)
            if (a.pos <= x) m += a.mass;
        return m;
    }

    const std::vector<Drift>& drift() const { return drift_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    bool operator==(const FiniteMeasure& o) const {
        return drift_ == o.drift_ && atoms_ == o.atoms_;
    }

private:
    void normalize() {
        std::sort(drift_.begin(), drift_.end(),
                  [](const Drift& a, const Drift& b) { return a.from < b.from; });
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
        // merge adjacent equal-rate segments and coincident atoms
        std::vector<Drift> d;
        for (const auto& seg : drift_) {
            if (!d.empty() && d.back().to == seg.from && d.back().rate == seg.rate)
                d.back().to = seg.to;
            else
                d.push_back(seg);
        }
        drift_.swap(d);
        std::vector<Atom> a;
        for (const auto& at : atoms_) {
            if (!a.empty() && a.back().pos == at.pos)
                a.back().mass += at.mass;
            else
                a.push_back(at);
        }
        atoms_.swap(a);
    }

    void validate() const {
        double cursor = 0.0;
        for (const auto& d : drift_) {
            if (d.from != cursor)
                throw InputError("FiniteMeasure: drift must cover [0, S] contiguously");
            if (!(d.to > d.from)) throw InputError("FiniteMeasure: empty drift segment");
            if (!(d.rate > 0.0)) throw InputError("FiniteMeasure: drift rate must be positive");
            cursor = d.to;
        }
        const double S = cursor;
        for (const auto& a : atoms_) {
            if (!(a.mass > 0.0)) throw InputError("FiniteMeasure: atom mass must be positive");
            if (a.pos < 0.0 || a.pos > S)
                throw InputError("FiniteMeasure: atom outside [0, S] (support must be an interval)");
        }
    }

    std::vector<Drift> drift_;
    std::vector<Atom> atoms_;
};

inline double total_mass(const FiniteMeasure& mu) { return mu.total_mass(); }
inline double sup_support(const FiniteMeasure& mu) { return mu.sup_support(); }

// k_r mu: the unique element of M_f* with CDF F /\ (|mu| - r). Keeps mass from
// the bottom until the cap; an atom straddling the cap is split by mass and
// S(k_r mu) lands at its position.
inline FiniteMeasure truncate(const FiniteMeasure& mu, double r) {
    const double total = mu.total_mass();
    if (r < 0.0 || r > total) throw DomainError("truncate: r outside [0, |mu|]");
    double remaining = total - r;
    if (remaining == 0.0) return FiniteMeasure();
    if (r == 0.0) return mu;

    // Sweep the measure bottom-up as an ordered event list: drift pieces cut at
    // atom positions, with each atom sitting after the drift below it.
    struct Event {
        bool is_atom;
        double from, to, rate;  // drift piece
        double pos, mass;       // atom
    };
    std::vector<Event> events;
    std::size_t ai = 0;
    const auto& in_atoms = mu.atoms();
    while (ai < in_atoms.size() && in_atoms[ai].pos == 0.0) {
        events.push_back({true, 0, 0, 0, in_atoms[ai].pos, in_atoms[ai].mass});
        ++ai;
    }
    for (const auto& seg : mu.drift()) {
        double x = seg.from;
        while (ai < in_atoms.size() && in_atoms[ai].pos <= seg.to) {
            const double p = in_atoms[ai].pos;
            if (p > x) {
                events.push_back({false, x, p, seg.rate, 0, 0});
                x = p;
            }
            events.push_back({true, 0, 0, 0, p, in_atoms[ai].mass});
            ++ai;
        }
        if (x < seg.to) events.push_back({false, x, seg.to, seg.rate, 0, 0});
    }

    std::vector<FiniteMeasure::Drift> drift;
    std::vector<FiniteMeasure::Atom> atoms;
    for (const auto& ev : events) {
        if (ev.is_atom) {
            const double take = std::min(remaining, ev.mass);
            atoms.push_back({ev.pos, take});
            remaining -= take;
        } else {
            const double piece = ev.rate * (ev.to - ev.from);
            if (remaining < piece) {
                drift.push_back({ev.from, ev.from + remaining / ev.rate, ev.rate});
                remaining = 0.0;
            } else {
                drift.push_back({ev.from, ev.to, ev.rate});
                remaining -= piece;
            }
        }
        if (remaining == 0.0) break;
    }
    return FiniteMeasure(std::move(drift), std::move(atoms));
}

// mu-bar: image of mu under t -> S(mu) - t. Involution preserving |mu| and S.
inline FiniteMeasure reverse_measure(const FiniteMeasure& mu) {
    const double S = mu.sup_support();
    std::vector<FiniteMeasure::Drift> drift;
    for (auto it = mu.drift().rbegin(); it != mu.drift().rend(); ++it)
        drift.push_back({S - it->to, S - it->from, it->rate});
    std::vector<FiniteMeasure::Atom> atoms;
    for (const auto& a : mu.atoms()) atoms.push_back({S - a.pos, a.mass});
    return FiniteMeasure(std::move(drift), std::move(atoms));
}

}  // namespace levytree
