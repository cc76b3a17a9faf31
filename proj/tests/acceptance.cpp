// Acceptance gate: ten end-to-end criteria, one printed pass/fail line each.
// Exits nonzero when any criterion fails its pinned tolerance or time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oal/analytic.hpp"
#include "oal/cli.hpp"
#include "oal/config.hpp"
#include "oal/errors.hpp"
#include "oal/fock.hpp"
#include "oal/measures.hpp"
#include "oal/params.hpp"
#include "oal/propagator.hpp"
#include "oal/scan.hpp"

namespace {

using namespace oal;
using Curve = std::function<double(double)>;

// ---- pinned tolerances -----------------------------------------------------
constexpr double kTolCritical = 1e-4;         // 1: r_c against sqrt(0.1)
constexpr double kTolRouteAgree = 1e-6;       // 2: closed form vs measures
constexpr double kTolQuoted = 0.01;           // 2: quoted limiting <n> values
constexpr double kNoiseMaxLo = 0.9;           // 3: max T window
constexpr double kNoiseMaxHi = 1.1;           // 3
constexpr double kTolPhaseAtMax = 0.05;       // 3: phi mod pi at the maximum
constexpr double kPlateauFloor = 3.0;         // 3: r=1 plateau level
constexpr double kPlateauRipple = 0.05;       // 3: relative phase ripple
constexpr double kTolOffset = 1e-3;           // 4,5: ordering phase offset
constexpr double kTolZeroPhase = 1e-3;        // 5: T_A zero locations
constexpr double kZeroDepth = 1e-4;           // 5: T_A value at a strict zero
constexpr double kFidelityFloor = 1.0 - 1e-6; // 6: HK vs closed form
constexpr double kXiCoeff = 1e-10;            // 7: interior commutator bound
constexpr double kTolClosedVsFock = 1e-6;     // 8
constexpr double kTolProbSum = 1e-12;         // 8
constexpr double kNormDriftBound = 1e-9;      // 10
constexpr double kTolDisplacement = 1e-8;     // 10
constexpr double kTolMirror = 1e-12;          // 10

const double kSqrtTenth = std::sqrt(0.1);

struct Check {
    bool ok = true;
    std::string detail;
};

std::vector<double> g_norm_drifts; // collected by criteria 6 and 9, judged by 10

std::string fnum(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

double dist_mod(double x, double target, double period) {
    double d = std::fmod(x - target, period);
    if (d < 0.0)
        d += period;
    return std::min(d, period - d);
}

// Golden-section refinement of a bracketed extremum down to ~5e-13 in t.
double refine_extremum(const Curve& f, double lo, double hi, bool maximize) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 5e-13) {
        const bool left = maximize ? (fc > fd) : (fc < fd);
        if (left) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct Extremum {
    double t = 0.0;
    double value = 0.0;
    bool is_max = false;
};

std::vector<Extremum> find_extrema(const Curve& f, double lo, double hi, int n) {
    std::vector<double> ts(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = lo + (hi - lo) * i / (n - 1);
        vs[i] = f(ts[i]);
    }
    std::vector<Extremum> out;
    for (int i = 1; i + 1 < n; ++i) {
        const bool mx = vs[i] > vs[i - 1] && vs[i] >= vs[i + 1];
        const bool mn = vs[i] < vs[i - 1] && vs[i] <= vs[i + 1];
        if (!mx && !mn)
            continue;
        const double t = refine_extremum(f, ts[i - 1], ts[i + 1], mx);
        out.push_back({t, f(t), mx});
    }
    return out;
}

// Number parity of the plus-branch conditional state, in closed form from the
// two coherent amplitudes (independent of the Fock-space measures).
double parity_plus_closed(double t, const SystemParams& p, Ordering ord) {
    const CatState c = conditional_state(t, p, Branch::plus, ord);
    const double e1 = std::exp(-2.0 * std::norm(c.alpha_plus));
    const double e2 = std::exp(-2.0 * std::norm(c.alpha_minus));
    const Complex cross =
        std::exp(Complex(0.0, 2.0 * c.phi)) * coherent_overlap(c.alpha_plus, -c.alpha_minus);
    return (e1 + e2 + 2.0 * cross.real()) / (4.0 * c.prob);
}

double ta_plus(double t, const SystemParams& p, Ordering ord, int dim) {
    return relative_total_noise(cat_to_fock(conditional_state(t, p, Branch::plus, ord), dim));
}

// Offset between the with/without-ordering curves, measured from extremum
// instants.  Two readings are produced:
//  * naive_mean: the raw instant shift against the nearest same-type extremum
//    of the other curve, converted with the no-ordering phase rate.  The slow
//    envelope (amplitude magnitudes and overlap phase) drifts between the two
//    matched instants, which biases this reading by an O(r^2 delta dt) amount
//    that does not cancel under symmetric averaging; it is kept as a coarse
//    structural check only.
//  * exact_mean: the difference of the two phase laws evaluated at the
//    measured with-ordering instants, averaged over pairs symmetric about
//    t0/2.  The odd part of the phase-law difference cancels exactly within a
//    pair, so this reading isolates the offset at t0/2 itself.
struct OffsetResult {
    int n_with = 0;
    int n_without = 0;
    int n_pairs = 0;
    double exact_mean = 0.0;
    double naive_mean = 0.0;
};

OffsetResult measure_offset(const SystemParams& p, const Curve& with_curve, const Curve& wo_curve,
                            double lo, double hi, int n, double adj_spacing) {
    OffsetResult r;
    auto we = find_extrema(with_curve, lo, hi, n);
    auto wo = find_extrema(wo_curve, lo, hi, n);
    r.n_with = static_cast<int>(we.size());
    r.n_without = static_cast<int>(wo.size());
    const double rate = p.omega12 + p.r() * p.r() * p.delta();

    std::vector<double> naive;
    for (const auto& e : we) {
        const Extremum* best = nullptr;
        for (const auto& o : wo)
            if (o.is_max == e.is_max && (!best || std::abs(o.t - e.t) < std::abs(best->t - e.t)))
                best = &o;
        if (best && std::abs(best->t - e.t) <= adj_spacing)
            naive.push_back(rate * (e.t - best->t));
    }
    if (!naive.empty()) {
        double s = 0.0;
        for (double v : naive)
            s += v;
        r.naive_mean = s / static_cast<double>(naive.size());
    }

    std::sort(we.begin(), we.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
    const double t0 = p.t0();
    const double tol_pair = 0.25 * adj_spacing;
    std::vector<double> vals;
    if (!we.empty()) {
        size_t i = 0, j = we.size() - 1;
        while (i < j) {
            const double s = we[i].t + we[j].t - t0;
            if (std::abs(s) <= tol_pair && we[i].is_max == we[j].is_max) {
                vals.push_back(0.5 * (ordering_correction(we[i].t, p) + ordering_correction(we[j].t, p)));
                ++i;
                --j;
            } else if (s < 0.0) {
                ++i;
            } else {
                --j;
            }
        }
    }
    r.n_pairs = static_cast<int>(vals.size());
    if (!vals.empty()) {
        double s = 0.0;
        for (double v : vals)
            s += v;
        r.exact_mean = s / static_cast<double>(vals.size());
    }
    return r;
}

// ---- criterion 1: reported critical drive ratio ----------------------------
Check criterion1() {
    Check c;
    std::ostringstream out, err;
    const char* argv[] = {"oal", "critical"};
    const int rc = run_cli(2, argv, out, err);
    const std::string text = out.str();
    const auto pos = text.find("r_c = ");
    double cli_rc = -1.0;
    if (pos != std::string::npos)
        cli_rc = std::stod(text.substr(pos + 6));

    // Independent bisection: the half-period ordering phase r^2 * pi reaches
    // one tenth of pi at the critical ratio.
    auto excess = [](double r) {
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        return ordering_correction(0.5 * p.t0(), p) - 0.1 * M_PI;
    };
    double lo = 0.02, hi = 1.5;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? hi : lo) = mid;
    }
    const double bisect = 0.5 * (lo + hi);

    c.ok = rc == 0 && pos != std::string::npos && std::abs(cli_rc - kSqrtTenth) <= kTolCritical &&
           std::abs(bisect - kSqrtTenth) <= 1e-9 && std::abs(cli_rc - bisect) <= kTolCritical;
    c.detail = "cli r_c=" + fnum(cli_rc, 12) + ", bisection=" + fnum(bisect, 12) +
               ", target sqrt(0.1)=" + fnum(kSqrtTenth, 12) + ", tol " + fnum(kTolCritical);
    return c;
}

// ---- criterion 2: limiting mean photon numbers at amplitude 2 r_c ----------
Check criterion2() {
    Check c;
    const double amp = 2.0 * kSqrtTenth;
    const double x = 0.4; // amp^2
    const double closed_odd = x / std::tanh(x);
    const double closed_even = x * std::tanh(x);
    const double closed_ys = x;

    const int dim = coherent_dim_for(amp);
    const double lib_odd = mean_photon_number(odd_coherent(amp, dim));
    const double lib_even = mean_photon_number(even_coherent(amp, dim));
    const double lib_ys = mean_photon_number(yurke_stoler(amp, dim));

    const double agree = std::max({std::abs(lib_odd - closed_odd), std::abs(lib_even - closed_even),
                                   std::abs(lib_ys - closed_ys)});
    const double quoted = std::max(
        {std::abs(lib_odd - 1.05), std::abs(lib_even - 0.15), std::abs(lib_ys - 0.40)});
    c.ok = agree <= kTolRouteAgree && quoted <= kTolQuoted;
    c.detail = "odd=" + fnum(lib_odd, 8) + " even=" + fnum(lib_even, 8) + " ys=" + fnum(lib_ys, 8) +
               "; route disagreement " + fnum(agree, 3) + " (tol " + fnum(kTolRouteAgree) +
               "), quoted offset " + fnum(quoted, 3) + " (tol " + fnum(kTolQuoted) + ")";
    return c;
}

// ---- criterion 3: total-noise maxima and the r=1 plateau -------------------
Check criterion3() {
    Check c;
    std::ostringstream d;
    {
        const SystemParams p = SystemParams::dimensionless(0.25, 8.0);
        const double t0 = p.t0();
        const int n = 20000;
        for (Branch br : {Branch::plus, Branch::minus}) {
            auto curve = [&](double t) {
                return total_noise_closed_form(conditional_state(t, p, br, Ordering::with_ordering));
            };
            int besti = 1;
            double bestv = -1.0;
            for (int j = 1; j < n; ++j) {
                const double v = curve(t0 * j / n);
                if (v > bestv) {
                    bestv = v;
                    besti = j;
                }
            }
            double tstar = t0 * besti / n;
            if (besti >= 2 && besti + 2 <= n)
                tstar = refine_extremum(curve, t0 * (besti - 1) / n, t0 * (besti + 1) / n, true);
            const double tmax = curve(tstar);
            const double phi = phase_exact(tstar, p);
            // The minus-branch superposition carries a relative minus sign, so
            // its odd-superposition maxima sit a quarter period away in phi.
            const double shift = br == Branch::plus ? 0.0 : 0.5 * M_PI;
            const double dev = dist_mod(phi + shift, 0.5 * M_PI, M_PI);
            const bool ok = tmax >= kNoiseMaxLo && tmax <= kNoiseMaxHi && dev <= kTolPhaseAtMax;
            c.ok = c.ok && ok;
            d << (br == Branch::plus ? "plus" : "minus") << ": Tmax=" << fnum(tmax, 6)
              << " phi-dev=" << fnum(dev, 3) << "; ";
        }
    }
    {
        const SystemParams p = SystemParams::dimensionless(1.0, 8.0);
        const double t0 = p.t0();
        const int n = 4001;
        double tmin = 1e300, tmax = -1e300, ripple = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = (0.45 + 0.10 * j / (n - 1)) * t0;
            for (Branch br : {Branch::plus, Branch::minus}) {
                const double v =
                    total_noise_closed_form(conditional_state(t, p, br, Ordering::with_ordering));
                tmin = std::min(tmin, v);
                tmax = std::max(tmax, v);
            }
            const double x = std::abs(overlap_q(t, p, Ordering::with_ordering));
            ripple = std::max(ripple, 2.0 * x / (1.0 + x * x));
        }
        const double observed = (tmax - tmin) / (tmax + tmin);
        const bool ok = tmin > kPlateauFloor && ripple < kPlateauRipple && observed < kPlateauRipple;
        c.ok = c.ok && ok;
        d << "r=1 plateau: min T=" << fnum(tmin, 5) << ", phase ripple=" << fnum(ripple, 3)
          << ", window swing=" << fnum(observed, 3);
    }
    c.detail = d.str();
    return c;
}

// ---- criterion 4: ordering phase offset from parity extrema ----------------
Check criterion4() {
    Check c;
    std::ostringstream d;
    double fraction_small = 1.0, fraction_large = 0.0;
    struct Case {
        double r;
        double target;
        double naive_lo, naive_hi;
    };
    const Case cases[] = {{0.5, 0.25 * M_PI, 0.3, 1.1}, {0.25, 0.0625 * M_PI, 0.01, 0.35}};
    for (const Case& cs : cases) {
        const SystemParams p = SystemParams::dimensionless(cs.r, 50.0);
        const double t0 = p.t0();
        const double rate = p.omega12 + p.r() * p.r() * p.delta();
        const double adj = 0.5 * M_PI / rate; // adjacent parity extrema: pi/2 in phi
        auto cw = [&](double t) { return parity_plus_closed(t, p, Ordering::with_ordering); };
        auto cwo = [&](double t) { return parity_plus_closed(t, p, Ordering::without_ordering); };
        const OffsetResult m = measure_offset(p, cw, cwo, 0.45 * t0, 0.55 * t0, 4001, adj);
        const double err = std::abs(m.exact_mean - cs.target);
        const bool ok = m.n_with >= 16 && m.n_pairs >= 6 && err <= kTolOffset &&
                        m.naive_mean >= cs.naive_lo && m.naive_mean <= cs.naive_hi;
        c.ok = c.ok && ok;
        if (cs.r == 0.5)
            fraction_large = m.exact_mean / M_PI;
        else
            fraction_small = m.exact_mean / M_PI;
        d << "r=" << fnum(cs.r, 3) << ": offset=" << fnum(m.exact_mean, 8) << " (target "
          << fnum(cs.target, 8) << ", " << m.n_pairs << " pairs), raw-shift=" << fnum(m.naive_mean, 3)
          << "; ";
    }
    // Negligibility contrast: at r=0.25 the offset is a small fraction of the
    // parity period, at r=0.5 it is a quarter period.
    const bool contrast = fraction_small < 0.1 && fraction_large >= 0.2;
    c.ok = c.ok && contrast;
    d << "period fractions " << fnum(fraction_small, 3) << " / " << fnum(fraction_large, 3);
    c.detail = d.str();
    return c;
}

// ---- criterion 5: T_A zeros at the quarter-phase instants ------------------
Check criterion5() {
    Check c;
    std::ostringstream d;
    const double r = 0.5;
    const int dim = 40;

    // (a) structure at omega12/delta = 50: every phase period in the window
    // around t0/2 carries its pair of near-zero minima.
    const SystemParams p50 = SystemParams::dimensionless(r, 50.0);
    const double t0 = p50.t0();
    const double rate50 = p50.omega12 + r * r * p50.delta();
    const double spacing50 = 0.5 * M_PI / rate50; // minima every pi/2 in phi
    auto ta50w = [&](double t) { return ta_plus(t, p50, Ordering::with_ordering, dim); };
    {
        const auto ext = find_extrema(ta50w, 0.5 * t0 - 7.2 * spacing50, 0.5 * t0 + 7.2 * spacing50, 4001);
        std::vector<Extremum> mins;
        for (const auto& e : ext)
            if (!e.is_max)
                mins.push_back(e);
        double worst_val = 0.0, worst_gap = 0.0;
        for (size_t i = 0; i < mins.size(); ++i) {
            worst_val = std::max(worst_val, mins[i].value);
            if (i > 0)
                worst_gap = std::max(worst_gap, mins[i].t - mins[i - 1].t);
        }
        const bool ok = mins.size() >= 12 && mins.size() <= 16 && worst_val < 0.05 &&
                        worst_gap < 1.5 * spacing50;
        c.ok = c.ok && ok;
        d << "ratio 50: " << mins.size() << " minima, max value " << fnum(worst_val, 3)
          << ", max gap/spacing " << fnum(worst_gap / spacing50, 3) << "; ";
    }

    // (b) location accuracy demands a deep drive hierarchy: the minima drift
    // linearly with the distance from t0/2 at rate ~0.77 per unit delta*t, so
    // the 1e-3 window is tested where that drift is resolved away.
    {
        const SystemParams p = SystemParams::dimensionless(r, 1e4);
        const double rate = p.omega12 + r * r * p.delta();
        const double spacing = 0.5 * M_PI / rate;
        auto ta = [&](double t) { return ta_plus(t, p, Ordering::with_ordering, dim); };
        const auto ext =
            find_extrema(ta, 0.5 * p.t0() - 6.2 * spacing, 0.5 * p.t0() + 6.2 * spacing, 8001);
        std::vector<Extremum> mins;
        for (const auto& e : ext)
            if (!e.is_max)
                mins.push_back(e);
        double worst_dev = 0.0, worst_val = 0.0, worst_gap = 0.0;
        for (size_t i = 0; i < mins.size(); ++i) {
            const double phi = phase_exact(mins[i].t, p);
            const double dev =
                std::min(dist_mod(phi, 0.25 * M_PI, M_PI), dist_mod(phi, 0.75 * M_PI, M_PI));
            worst_dev = std::max(worst_dev, dev);
            worst_val = std::max(worst_val, mins[i].value);
            if (i > 0)
                worst_gap = std::max(worst_gap, mins[i].t - mins[i - 1].t);
        }
        const bool ok = mins.size() >= 12 && worst_val < kZeroDepth && worst_dev <= kTolZeroPhase &&
                        worst_gap < 1.5 * spacing;
        c.ok = c.ok && ok;
        d << "ratio 1e4: " << mins.size() << " zeros, worst phase dev " << fnum(worst_dev, 3)
          << " (tol " << fnum(kTolZeroPhase) << "), depth<" << fnum(worst_val, 2) << "; ";
    }

    // (c) the zeros shift between ordering modes by the criterion-4 offset.
    {
        auto ta50wo = [&](double t) { return ta_plus(t, p50, Ordering::without_ordering, dim); };
        const OffsetResult m =
            measure_offset(p50, ta50w, ta50wo, 0.5 * t0 - 7.2 * spacing50, 0.5 * t0 + 7.2 * spacing50,
                           4001, 0.25 * M_PI / rate50);
        const double err = std::abs(m.exact_mean - 0.25 * M_PI);
        const bool ok =
            m.n_pairs >= 6 && err <= kTolOffset && std::abs(m.n_with - m.n_without) <= 2;
        c.ok = c.ok && ok;
        d << "shift=" << fnum(m.exact_mean, 8) << " (target " << fnum(0.25 * M_PI, 8) << ", err "
          << fnum(err, 2) << ")";
    }
    c.detail = d.str();
    return c;
}

// ---- criterion 6: stepped propagator converges to the closed form ----------
Check criterion6() {
    Check c;
    double min_fid = 1.0;
    long max_steps = 0;
    const double isq2 = 1.0 / std::sqrt(2.0);
    for (double r : {0.25, 0.5, 1.0, 1.8}) {
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        const int dim = coherent_dim_for(2.0 * r);
        const AtomFieldState init = AtomFieldState::ground_superposition(isq2, isq2, dim);
        for (double frac : {0.25, 0.5, 1.0}) {
            const double tf = frac * p.t0();
            const AtomFieldState target = magnus_UK(tf, p, init, Ordering::with_ordering);
            long steps = 0;
            double fid = 0.0;
            for (int attempt = 0; attempt < 6; ++attempt) {
                PropagateOptions o;
                o.steps = steps;
                o.sample_times = {tf};
                const PropagationResult res = propagate_HK(init, tf, p, o);
                fid = fidelity(res.final_state, target);
                g_norm_drifts.push_back(res.max_norm_drift);
                max_steps = std::max(max_steps, res.step_count);
                steps = 2 * res.step_count;
                if (fid >= kFidelityFloor)
                    break;
            }
            min_fid = std::min(min_fid, fid);
            c.ok = c.ok && fid >= kFidelityFloor;
        }
    }
    c.detail = "min fidelity " + fnum(min_fid, 12) + " (floor " + fnum(kFidelityFloor, 12) +
               "), max steps " + std::to_string(max_steps);
    return c;
}

// ---- criterion 7: interior nested commutator vanishes ----------------------
Check criterion7() {
    Check c;
    std::mt19937 rng(20260813u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double rs[] = {0.25, 0.5, 1.0, 1.8};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = rs[i % 4];
        const int dim = (i % 2 == 0) ? 32 : 48;
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        const double t0 = p.t0();
        const double norm = nested_commutator_norm(uni(rng) * t0, uni(rng) * t0, uni(rng) * t0, p, dim);
        const double bound = kXiCoeff * std::pow(r * p.delta(), 3);
        worst = std::max(worst, norm / bound);
        c.ok = c.ok && norm <= bound;
    }
    c.detail = "worst interior norm = " + fnum(worst, 3) + " of the 1e-10 (r delta)^3 bound";
    return c;
}

// ---- criterion 8: closed-form vs Fock-space total noise --------------------
Check criterion8() {
    Check c;
    double worst_t = 0.0, worst_p = 0.0;
    for (double r : {0.25, 0.5, 1.0, 1.8}) {
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        const double t0 = p.t0();
        const int dim = coherent_dim_for(2.0 * r);
        for (int j = 0; j <= 65; ++j) {
            const double t = t0 * j / 65.0;
            for (Ordering ord : {Ordering::with_ordering, Ordering::without_ordering}) {
                const double sum = detection_probability(t, p, Branch::plus, ord) +
                                   detection_probability(t, p, Branch::minus, ord);
                worst_p = std::max(worst_p, std::abs(sum - 1.0));
                if (j == 0 || j == 65)
                    continue; // vanishing-probability branch at the endpoints
                for (Branch br : {Branch::plus, Branch::minus}) {
                    const CatState cat = conditional_state(t, p, br, ord);
                    const double closed = total_noise_closed_form(cat);
                    const double fock = total_noise(cat_to_fock(cat, dim));
                    worst_t = std::max(worst_t, std::abs(closed - fock));
                }
            }
        }
    }
    c.ok = worst_t <= kTolClosedVsFock && worst_p <= kTolProbSum;
    c.detail = "max |closed - Fock| = " + fnum(worst_t, 3) + " (tol " + fnum(kTolClosedVsFock) +
               "), max |p+ + p- - 1| = " + fnum(worst_p, 3);
    return c;
}

// ---- criterion 9: drive-hierarchy ladder in the three-level model ----------
Check criterion9() {
    Check c;
    std::ostringstream d;
    double fids[3] = {0, 0, 0}, excs[3] = {0, 0, 0};
    const double ratios[3] = {8.0, 50.0, 200.0};
    for (int k = 0; k < 3; ++k) {
        const SystemParams p = SystemParams::dimensionless(0.5, ratios[k]);
        const AtomFieldState init = AtomFieldState::bare_ground_vacuum(32);
        PropagateOptions o;
        o.compare_analytic = true;
        const PropagationResult res = propagate_HJ(init, 0.5 * p.t0(), p, o);
        fids[k] = res.samples.back().fidelity_vs_analytic;
        for (const auto& s : res.samples)
            excs[k] = std::max(excs[k], s.excited_population);
        g_norm_drifts.push_back(res.max_norm_drift);
    }
    c.ok = fids[0] < fids[1] && fids[1] < fids[2] && fids[2] <= 1.0 + 1e-12 && excs[0] > excs[1] &&
           excs[1] > excs[2];
    d << "fidelity " << fnum(fids[0], 8) << " -> " << fnum(fids[1], 8) << " -> " << fnum(fids[2], 8)
      << "; max excited population " << fnum(excs[0], 3) << " -> " << fnum(excs[1], 3) << " -> "
      << fnum(excs[2], 3);
    c.detail = d.str();
    return c;
}

// ---- criterion 10: invariant suite ------------------------------------------
Check criterion10() {
    Check c;
    std::ostringstream d;

    double drift = 0.0;
    for (double v : g_norm_drifts)
        drift = std::max(drift, v);
    const bool drift_ok = !g_norm_drifts.empty() && drift <= kNormDriftBound;
    c.ok = c.ok && drift_ok;
    d << "norm drift " << fnum(drift, 3) << " over " << g_norm_drifts.size() << " runs; ";

    std::mt19937 rng(0xACCE55u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst_disp = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double r = 0.15 + 0.85 * uni(rng);
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        double t = (0.05 + 0.90 * uni(rng)) * p.t0();
        const Branch br = (k % 2 == 0) ? Branch::plus : Branch::minus;
        const Complex beta = std::polar(uni(rng), 2.0 * M_PI * uni(rng));
        const int dim = coherent_dim_for(2.0 * r + std::abs(beta)) + 8;
        FockVector state = coherent_fock_vector(0.0, dim);
        for (;;) {
            try {
                state = cat_to_fock(conditional_state(t, p, br, Ordering::with_ordering), dim);
                break;
            } catch (const ZeroProbabilityError&) {
                t += 0.0137 * p.t0(); // deterministic nudge off a node
            }
        }
        const double diff = std::abs(total_noise(state) - total_noise(apply_displacement(beta, state)));
        worst_disp = std::max(worst_disp, diff);
    }
    c.ok = c.ok && worst_disp <= kTolDisplacement;
    d << "displacement invariance " << fnum(worst_disp, 3) << " (tol " << fnum(kTolDisplacement)
      << "); ";

    double worst_mirror = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double r = 0.05 + 1.75 * uni(rng);
        const SystemParams p = SystemParams::dimensionless(r, 50.0);
        const double t = 3.0 * p.t0() * uni(rng);
        const Complex ap = alpha_pm(t, p, Branch::plus);
        const Complex am = alpha_pm(t, p, Branch::minus);
        worst_mirror = std::max(worst_mirror, std::abs(am + std::conj(ap)));
    }
    c.ok = c.ok && worst_mirror <= kTolMirror;
    d << "mirror identity " << fnum(worst_mirror, 3) << "; ";

    ScenarioConfig cfg;
    cfg.r = 0.5;
    cfg.ratio = 50.0;
    cfg.t_start = 0.45;
    cfg.t_end = 0.55;
    cfg.n_points = 64;
    const auto rows1 = run_scan(cfg, Execution::parallel);
    const auto rows2 = run_scan(cfg, Execution::parallel);
    const auto rows3 = run_scan(cfg, Execution::serial);
    std::ostringstream s1, s2, s3;
    write_csv(s1, cfg, rows1);
    write_csv(s2, cfg, rows2);
    write_csv(s3, cfg, rows3);
    const bool csv_ok = s1.str() == s2.str() && s1.str() == s3.str() && !s1.str().empty();
    c.ok = c.ok && csv_ok;
    d << "CSV determinism " << (csv_ok ? "byte-identical" : "MISMATCH");
    c.detail = d.str();
    return c;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Check()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "critical drive ratio", 1.0, criterion1},
        {2, "limiting mean photon numbers", 1.0, criterion2},
        {3, "total-noise maxima and plateau", 10.0, criterion3},
        {4, "ordering phase offset (parity extrema)", 10.0, criterion4},
        {5, "generalized-coherent instants (T_A zeros)", 10.0, criterion5},
        {6, "effective propagator vs closed form", 60.0, criterion6},
        {7, "nested-commutator interior vanishing", 5.0, criterion7},
        {8, "closed-form vs Fock total noise", 10.0, criterion8},
        {9, "three-level drive-hierarchy ladder", 120.0, criterion9},
        {10, "invariant suite", 30.0, criterion10},
    };

    bool all_ok = true;
    for (const auto& cr : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check res;
        try {
            res = cr.fn();
        } catch (const std::exception& e) {
            res.ok = false;
            res.detail = std::string("unexpected exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= cr.limit_s;
        const bool ok = res.ok && in_budget;
        all_ok = all_ok && ok;
        std::printf("[criterion %2d] %s %s (%.2f s%s): %s\n", cr.id, ok ? "PASS" : "FAIL", cr.name,
                    secs, in_budget ? "" : " OVER BUDGET", res.detail.c_str());
    }
    std::printf(all_ok ? "acceptance: all 10 criteria passed\n"
                       : "acceptance: one or more criteria FAILED\n");
    return all_ok ? 0 : 1;
}
