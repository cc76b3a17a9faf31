#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oal/analytic.hpp"
#include "oal/errors.hpp"
#include "oal/measures.hpp"
#include "oal/params.hpp"
#include "oracle_helpers.hpp"

using namespace oal;
using C = std::complex<double>;
namespace nb = std::numbers;

namespace {

double wrapped_diff(double a, double b) {
    const double d = std::fabs(oal::fold_2pi(a) - oal::fold_2pi(b));
    return std::min(d, 2.0 * nb::pi - d);
}

} // namespace

TEST_CASE("branch amplitudes trace opposite circles of radius r") {
    const auto p = SystemParams::dimensionless(0.7, 50.0);
    const double t0 = p.t0();

    CHECK(std::abs(alpha_pm(0.0, p, Branch::plus)) <= 1e-15);
    CHECK(std::abs(alpha_pm(0.0, p, Branch::minus)) <= 1e-15);

    // Half a cycle: maximal separation at -+ 2r on the real axis.
    const C ap = alpha_pm(0.5 * t0, p, Branch::plus);
    const C am = alpha_pm(0.5 * t0, p, Branch::minus);
    CHECK(ap.real() == doctest::Approx(-1.4).epsilon(1e-12));
    CHECK(std::fabs(ap.imag()) <= 1e-12);
    CHECK(am.real() == doctest::Approx(+1.4).epsilon(1e-12));

    // Quarter cycle: e^{-i theta} = -i so alpha_+ = -r (1 + i).
    const C q = alpha_pm(0.25 * t0, p, Branch::plus);
    CHECK(q.real() == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(q.imag() == doctest::Approx(-0.7).epsilon(1e-12));

    // Mirror symmetry and periodicity.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ts(0.0, 3.0 * t0);
    for (int k = 0; k < 200; ++k) {
        const double t = ts(rng);
        const C a1 = alpha_pm(t, p, Branch::plus);
        const C a2 = alpha_pm(t, p, Branch::minus);
        CHECK(std::abs(a2 + std::conj(a1)) <= 1e-12);
        CHECK(std::abs(alpha_pm(t + t0, p, Branch::plus) - a1) <= 1e-10);
        // Both amplitudes live on the circle |alpha +- r| = r.
        CHECK(std::abs(a1 + C(p.r(), 0.0)) == doctest::Approx(p.r()).epsilon(1e-12));
    }
}

TEST_CASE("frozen phase values at half a cavity cycle") {
    // ratio 50, r = 0.5, delta = 1: at t = pi the naive phase is
    // 50.25 pi == pi/4 (mod 2 pi), the ordering deficit is pi/4, and the
    // exact phase is 50 pi == 0 (mod 2 pi).
    const auto p = SystemParams::dimensionless(0.5, 50.0);
    const double t = 0.5 * p.t0();
    CHECK(phase_no_ordering(t, p) == doctest::Approx(0.7853981633974483).epsilon(1e-12));
    CHECK(ordering_correction(t, p) == doctest::Approx(0.7853981633974483).epsilon(1e-12));
    CHECK(wrapped_diff(phase_exact(t, p), 0.0) <= 1e-12);
}

TEST_CASE("the three phase functions satisfy their defining identity mod 2pi") {
    const auto p = SystemParams::dimensionless(0.37, 50.0);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ts(0.0, 20.0 * p.t0());
    for (int k = 0; k < 500; ++k) {
        const double t = ts(rng);
        const double lhs = phase_no_ordering(t, p);
        const double rhs = phase_exact(t, p) + ordering_correction(t, p);
        CHECK(wrapped_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("ordering deficit grows monotonically and hits 2 pi r^2 per cycle") {
    const auto p = SystemParams::dimensionless(0.5, 50.0);
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double t = 2.0 * p.t0() * k / 1000.0;
        const double d = ordering_correction(t, p);
        CHECK(d >= prev - 1e-12);
        prev = d;
    }
    CHECK(ordering_correction(p.t0(), p) == doctest::Approx(0.5 * nb::pi).epsilon(1e-12));
    CHECK(ordering_correction(2.0 * p.t0(), p) == doctest::Approx(nb::pi).epsilon(1e-12));
}

TEST_CASE("branch interference term has the Gaussian magnitude") {
    const auto p = SystemParams::dimensionless(1.0, 50.0);
    // At t0/2 the amplitudes are -+2: |<alpha_+|alpha_->| = e^{-8}.
    const C q = overlap_q(0.5 * p.t0(), p, Ordering::with_ordering);
    CHECK(std::abs(q) == doctest::Approx(3.3546262790251185e-4).epsilon(1e-12));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ts(0.0, 2.0 * p.t0());
    for (int k = 0; k < 100; ++k) {
        const double t = ts(rng);
        CHECK(std::abs(overlap_q(t, p, Ordering::with_ordering)) <= 1.0 + 1e-12);
        // Ordering only rotates q: q_with = q_without * e^{-2 i dphi}.
        const C qw = overlap_q(t, p, Ordering::with_ordering);
        const C qo = overlap_q(t, p, Ordering::without_ordering);
        const C rot = std::polar(1.0, -2.0 * ordering_correction(t, p));
        CHECK(std::abs(qw - qo * rot) <= 1e-10);
    }
}

TEST_CASE("branch probabilities are complementary") {
    const auto p = SystemParams::dimensionless(0.8, 50.0);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ts(0.0, 2.0 * p.t0());
    for (int k = 0; k < 200; ++k) {
        const double t = ts(rng);
        for (auto ord : {Ordering::with_ordering, Ordering::without_ordering}) {
            const double pp = detection_probability(t, p, Branch::plus, ord);
            const double pm = detection_probability(t, p, Branch::minus, ord);
            CHECK(pp >= 0.0);
            CHECK(pm >= 0.0);
            CHECK(pp + pm == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("at t = 0 only the plus branch exists and it holds the vacuum") {
    const auto p = SystemParams::dimensionless(0.5, 50.0);
    CHECK(detection_probability(0.0, p, Branch::plus, Ordering::with_ordering) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(conditional_state(0.0, p, Branch::minus, Ordering::with_ordering),
                    ZeroProbabilityError);

    const auto cat = conditional_state(0.0, p, Branch::plus, Ordering::with_ordering);
    CHECK(cat.prob == doctest::Approx(1.0).epsilon(1e-14));
    const auto v = cat_to_fock(cat, 16);
    CHECK(std::abs(std::abs(v[0]) - 1.0) <= 1e-12);
    CHECK(total_noise(v) <= 1e-12);
}

TEST_CASE("an engineered half-cycle phase turns the conditional state into an odd superposition") {
    // ratio 50.5 makes the exact phase at t0/2 equal  50.5 pi = pi/2 (mod 2pi),
    // so the plus-branch state is the odd superposition of amplitudes -+1.
    const auto p = SystemParams::dimensionless(0.5, 50.5);
    const double t = 0.5 * p.t0();
    CHECK(wrapped_diff(phase_exact(t, p), 0.5 * nb::pi) <= 1e-12);

    const auto cat = conditional_state(t, p, Branch::plus, Ordering::with_ordering);
    // q = <a|-a> e^{i pi} = -e^{-2}: p_+ = (1 - e^{-2})/2.
    CHECK(cat.prob == doctest::Approx(0.43233235838169365).epsilon(1e-12));

    const int dim = 31;
    const auto got = cat_to_fock(cat, dim);
    const auto want = odd_coherent(cat.alpha_plus, dim);
    CHECK(std::norm(inner_product(want, got)) == doctest::Approx(1.0).epsilon(1e-10));

    // Total noise of an odd superposition at x = |alpha|^2 = 1: x coth x.
    const double x = 1.0;
    CHECK(total_noise_closed_form(cat) == doctest::Approx(x / std::tanh(x)).epsilon(1e-9));
    CHECK(total_noise(got) == doctest::Approx(x / std::tanh(x)).epsilon(1e-8));
}

TEST_CASE("half-cycle states at integer and quarter ratios hit the other frozen noise values") {
    // ratio 50: phase 0 -> even superposition, T = x tanh x at x = 1.
    {
        const auto p = SystemParams::dimensionless(0.5, 50.0);
        const auto cat = conditional_state(0.5 * p.t0(), p, Branch::plus, Ordering::with_ordering);
        CHECK(total_noise_closed_form(cat) == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
        const auto v = cat_to_fock(cat, 31);
        CHECK(parity_expectation(v) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // ratio 50.25: phase pi/4 -> 90-degree superposition, T = x(1 - e^{-4x}).
    {
        const auto p = SystemParams::dimensionless(0.5, 50.25);
        const auto cat = conditional_state(0.5 * p.t0(), p, Branch::plus, Ordering::with_ordering);
        CHECK(total_noise_closed_form(cat) ==
              doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-9));
        // 90-degree superpositions have Poisson statistics: <n> = x = 1.
        const auto v = cat_to_fock(cat, 31);
        CHECK(mean_photon_number(v) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("closed-form total noise matches the number-basis evaluation broadly") {
    const auto p = SystemParams::dimensionless(0.25, 50.0);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ts(0.02, 0.98);
    for (int k = 0; k < 25; ++k) {
        const double t = ts(rng) * p.t0();
        for (auto br : {Branch::plus, Branch::minus})
            for (auto ord : {Ordering::with_ordering, Ordering::without_ordering}) {
                if (detection_probability(t, p, br, ord) < 1e-6)
                    continue;
                const auto cat = conditional_state(t, p, br, ord);
                const auto v = cat_to_fock(cat, 31);
                CHECK(total_noise(v) ==
                      doctest::Approx(total_noise_closed_form(cat)).epsilon(1e-7).scale(1.0));
            }
    }
}

TEST_CASE("conditional states from both branches decompose the identity") {
    // p_+ |psi_+><psi_+| + p_- |psi_-><psi_-| must reproduce the unconditional
    // field moments; spot-check <n> against the branch-average of |alpha|^2.
    const auto p = SystemParams::dimensionless(0.6, 50.0);
    const double t = 0.37 * p.t0();
    const int dim = coherent_dim_for(2.0 * 0.6);
    double n_mix = 0.0;
    for (auto br : {Branch::plus, Branch::minus}) {
        const auto cat = conditional_state(t, p, br, Ordering::with_ordering);
        n_mix += cat.prob * mean_photon_number(cat_to_fock(cat, dim));
    }
    const double n_expected = std::norm(alpha_pm(t, p, Branch::plus)); // = |alpha_-|^2
    CHECK(n_mix == doctest::Approx(n_expected).epsilon(1e-8));
}

TEST_CASE("parity of the conditional state follows the closed-form reference") {
    const auto p = SystemParams::dimensionless(0.5, 50.0);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> ts(0.3, 0.7);
    for (int k = 0; k < 20; ++k) {
        const double t = ts(rng) * p.t0();
        for (auto ord : {Ordering::with_ordering, Ordering::without_ordering}) {
            const auto cat = conditional_state(t, p, Branch::plus, ord);
            const auto v = cat_to_fock(cat, 31);
            const double want = oracle::cat_parity(cat.alpha_plus, cat.alpha_minus, cat.phi, +1);
            CHECK(parity_expectation(v) == doctest::Approx(want).epsilon(1e-8).scale(1.0));
        }
    }
}
