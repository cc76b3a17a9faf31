#include "oal/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>

namespace oal {

namespace {

constexpr double pi = 3.14159265358979323846;

int branch_count_for(AtomBasis b) { return b == AtomBasis::two_level ? 2 : 3; }

void validate_state(const AtomFieldState& s, const char* what) {
    if (s.branch_count() != branch_count_for(s.basis))
        throw DimensionMismatchError(std::string(what) + ": basis expects " +
                                     std::to_string(branch_count_for(s.basis)) + " branches, state has " +
                                     std::to_string(s.branch_count()));
    if (s.dim() < 1)
        throw InvalidDimensionError(std::string(what) + ": empty field space");
    for (const auto& b : s.branches)
        if (b.size() != s.dim())
            throw DimensionMismatchError(std::string(what) + ": branches differ in field dimension");
}

void require_unit_norm(const AtomFieldState& s, const char* what) {
    if (std::abs(s.norm_sq() - 1.0) > 1e-10)
        throw NormalizationError(std::string(what) + ": initial state norm^2 = " + std::to_string(s.norm_sq()));
}

Eigen::VectorXcd stack(const AtomFieldState& s) {
    const int n = s.dim();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n) * s.branch_count());
    for (int b = 0; b < s.branch_count(); ++b)
        v.segment(static_cast<Eigen::Index>(b) * n, n) = s.branches[b];
    return v;
}

void unstack(const Eigen::VectorXcd& v, AtomFieldState& s) {
    const int n = s.dim();
    for (int b = 0; b < s.branch_count(); ++b)
        s.branches[b] = v.segment(static_cast<Eigen::Index>(b) * n, n);
}

// Scalar frame phases of the ground doublet: branch |+> picks up
// exp(-i omega12 t), branch |-> the conjugate, |3> none.
void apply_u1(AtomFieldState& s, double t, const SystemParams& p, bool inverse) {
    const double a = reduce_phase(p.omega12, t);
    const Complex ph = std::polar(1.0, inverse ? a : -a);
    s.branches[0] *= ph;
    s.branches[1] *= std::conj(ph);
}

// Second frame: branch |+> evolves with exp(-i (delta n + r^2 delta) t),
// branch |-> with the conjugate phases.
void apply_u2(AtomFieldState& s, double t, const SystemParams& p, bool inverse) {
    const double theta = reduce_phase(p.delta(), t);
    const double chi = reduce_phase(p.r() * p.r() * p.delta(), t);
    const int n = s.dim();
    for (int k = 0; k < n; ++k) {
        const double ang = fold_2pi(k * theta + chi);
        const Complex ph = std::polar(1.0, inverse ? ang : -ang);
        s.branches[0][k] *= ph;
        s.branches[1][k] *= std::conj(ph);
    }
}

// Closed-form third-picture evolution on the two ground branches (the public
// magnus_UK wraps this with basis checks).
void magnus_on_ground(AtomFieldState& s, double t, const SystemParams& p, Ordering ordering) {
    const double theta = reduce_phase(p.delta(), t);
    const double r = p.r();
    const Complex ap = r * (1.0 - std::polar(1.0, theta));  // displacement of branch |+>
    const Complex am = -r * (1.0 - std::polar(1.0, -theta)); // displacement of branch |->

    const double before = s.norm_sq();
    FockVector bp = apply_displacement(ap, FockVector(s.branches[0]));
    FockVector bm = apply_displacement(am, FockVector(s.branches[1]));
    s.branches[0] = bp.coeffs();
    s.branches[1] = bm.coeffs();
    const double after = s.norm_sq();
    if (before > 0.0 && std::abs(after - before) > 1e-8 * before)
        throw ConvergenceError("magnus_UK: displacement lost norm (truncation); increase dim beyond " +
                               std::to_string(s.dim()));

    if (ordering == Ordering::with_ordering) {
        const double dphi = ordering_correction(t, p);
        const Complex ph = std::polar(1.0, fold_2pi(dphi));
        s.branches[0] *= ph;
        s.branches[1] *= std::conj(ph);
    }
}

using AdvanceFn = std::function<void(AtomFieldState&, double, double)>;
using RefFn = std::function<AtomFieldState(double)>;

std::vector<double> sample_grid(double t, const PropagateOptions& opts) {
    if (!opts.sample_times.empty()) {
        std::vector<double> ts = opts.sample_times;
        for (size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] < 0.0 || ts[i] > t * (1.0 + 1e-12) + 1e-300)
                throw ConfigError("sample time outside [0, t]");
            if (i > 0 && ts[i] < ts[i - 1])
                throw ConfigError("sample times must be non-decreasing");
        }
        return ts;
    }
    const int ns = 33;
    std::vector<double> ts(ns);
    for (int i = 0; i < ns; ++i)
        ts[i] = t * i / (ns - 1);
    return ts;
}

PropagationResult sampled_run(const AtomFieldState& initial, double t, const PropagateOptions& opts,
                              const AdvanceFn& advance, const RefFn& ref, long* steps_done) {
    PropagationResult res;
    AtomFieldState psi = initial;
    double t_cur = 0.0;

    auto record = [&](double ts) {
        const double nsq = psi.norm_sq();
        double tail = 0.0;
        for (const auto& b : psi.branches) {
            const int n = static_cast<int>(b.size());
            for (int k = std::max(0, n - 2); k < n; ++k)
                tail += std::norm(b[k]);
        }
        if (nsq > 0.0 && tail / nsq > opts.tail_tol)
            throw ConvergenceError("propagation: top-of-basis occupancy " + detail::num_str(tail / nsq) +
                                   " exceeds " + detail::num_str(opts.tail_tol) + " at t = " +
                                   detail::num_str(ts) + "; increase dim");

        PropagationSample smp;
        smp.t = ts;
        smp.norm = std::sqrt(nsq);
        if (psi.basis == AtomBasis::three_level)
            smp.excited_population = psi.branches[2].squaredNorm();
        smp.branch_photons.reserve(psi.branch_count());
        for (const auto& b : psi.branches) {
            double ph = 0.0;
            for (int k = 1; k < static_cast<int>(b.size()); ++k)
                ph += k * std::norm(b[k]);
            smp.branch_photons.push_back(ph);
        }
        if (ref)
            smp.fidelity_vs_analytic = fidelity(psi, ref(ts));
        res.max_norm_drift = std::max(res.max_norm_drift, std::abs(smp.norm - 1.0));
        res.samples.push_back(std::move(smp));
    };

    for (double ts : sample_grid(t, opts)) {
        if (ts > t_cur) {
            advance(psi, t_cur, ts);
            t_cur = ts;
        }
        record(ts);
    }
    if (t > t_cur)
        advance(psi, t_cur, t);

    res.final_state = std::move(psi);
    res.step_count = steps_done ? *steps_done : 0;
    return res;
}

// Midpoint-exponential advancer: split [from, to] into pieces close to the
// global target width and apply exp(-i H(t_mid) h) for each piece.
AdvanceFn stepping_advancer(double dt_target, long* steps_done,
                            const std::function<void(AtomFieldState&, double, double)>& step_once) {
    return [dt_target, steps_done, step_once](AtomFieldState& psi, double from, double to) {
        const double span = to - from;
        const long n = std::max<long>(1, std::lround(span / dt_target));
        const double h = span / static_cast<double>(n);
        for (long j = 0; j < n; ++j)
            step_once(psi, from + (j + 0.5) * h, h);
        *steps_done += n;
    };
}

long default_steps_hj(double t, const SystemParams& p) {
    return std::max<long>(16, static_cast<long>(std::ceil(40.0 * p.omega12 * t / (2.0 * pi))));
}

long default_steps_hk(double t, const SystemParams& p) {
    return std::max<long>(16, static_cast<long>(std::ceil(200.0 * t / p.t0())));
}

// Generic reference stepper: diagonalize H(t_mid) every step.
std::function<void(AtomFieldState&, double, double)>
eig_step(const std::function<Eigen::MatrixXcd(double)>& hamiltonian) {
    return [hamiltonian](AtomFieldState& psi, double t_mid, double h) {
        const Eigen::MatrixXcd hm = hamiltonian(t_mid);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
        Eigen::VectorXcd w = es.eigenvectors().adjoint() * stack(psi);
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w[k] *= std::polar(1.0, -es.eigenvalues()[k] * h);
        const Eigen::VectorXcd out = es.eigenvectors() * w;
        unstack(out, psi);
    };
}

bool ground_manifold_only(const AtomFieldState& s) {
    return s.basis == AtomBasis::two_level || s.branches[2].squaredNorm() < 1e-24;
}

// Closed-form reference state in the J frame (second picture):
// U_2(t) exp(Xi_1 + Xi_2) applied to the ground doublet of `initial`.
AtomFieldState analytic_uj(double ts, const SystemParams& p, const AtomFieldState& initial) {
    AtomFieldState ref;
    ref.basis = AtomBasis::two_level;
    ref.branches = {initial.branches[0], initial.branches[1]};
    magnus_on_ground(ref, ts, p, Ordering::with_ordering);
    apply_u2(ref, ts, p, false);
    if (initial.basis == AtomBasis::three_level) {
        ref.basis = AtomBasis::three_level;
        ref.branches.push_back(Eigen::VectorXcd::Zero(initial.dim()));
    }
    return ref;
}

} // namespace

double AtomFieldState::norm_sq() const {
    double n = 0.0;
    for (const auto& b : branches)
        n += b.squaredNorm();
    return n;
}

AtomFieldState AtomFieldState::plus_vacuum(int dim, AtomBasis basis) {
    return ground_superposition(1.0, 0.0, dim, basis);
}

AtomFieldState AtomFieldState::ground_superposition(Complex w_plus, Complex w_minus, int dim, AtomBasis basis) {
    if (dim < 1)
        throw InvalidDimensionError("ground_superposition: dim must be >= 1");
    AtomFieldState s;
    s.basis = basis;
    s.branches.assign(branch_count_for(basis), Eigen::VectorXcd::Zero(dim));
    s.branches[0][0] = w_plus;
    s.branches[1][0] = w_minus;
    return s;
}

AtomFieldState AtomFieldState::bare_ground_vacuum(int dim, AtomBasis basis) {
    const double w = 1.0 / std::sqrt(2.0);
    return ground_superposition(w, w, dim, basis);
}

double fidelity(const AtomFieldState& u, const AtomFieldState& v) {
    validate_state(u, "fidelity");
    validate_state(v, "fidelity");
    if (u.basis != v.basis || u.dim() != v.dim())
        throw DimensionMismatchError("fidelity: states live in different spaces");
    Complex ov = 0.0;
    for (int b = 0; b < u.branch_count(); ++b)
        ov += u.branches[b].dot(v.branches[b]);
    double f = std::norm(ov);
    if (f > 1.0 && f < 1.0 + 1e-9)
        f = 1.0;
    return f;
}

Eigen::MatrixXcd hamiltonian_HI(const SystemParams& p, int dim) {
    if (dim < 1)
        throw InvalidDimensionError("hamiltonian_HI: dim must be >= 1");
    const int n3 = 3 * dim;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n3, n3);
    const ModeOperator a = annihilation_matrix(dim);
    const ModeOperator id = ModeOperator::Identity(dim, dim);

    h.block(0, 0, dim, dim) = p.omega12 * id;
    h.block(dim, dim, dim, dim) = -p.omega12 * id;

    const ModeOperator cp = (p.g * a + p.omega23 * id) / std::sqrt(2.0); // |3><+| coupling
    const ModeOperator cm = (p.g * a - p.omega23 * id) / std::sqrt(2.0); // |3><-| coupling
    h.block(2 * dim, 0, dim, dim) = cp;
    h.block(2 * dim, dim, dim, dim) = cm;
    h.block(0, 2 * dim, dim, dim) = cp.adjoint();
    h.block(dim, 2 * dim, dim, dim) = cm.adjoint();
    return h;
}

Eigen::MatrixXcd hamiltonian_HJ(double t, const SystemParams& p, int dim) {
    if (dim < 1)
        throw InvalidDimensionError("hamiltonian_HJ: dim must be >= 1");
    const int n3 = 3 * dim;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n3, n3);
    const ModeOperator a = annihilation_matrix(dim);
    const ModeOperator id = ModeOperator::Identity(dim, dim);
    const Complex ph = std::polar(1.0, -reduce_phase(p.omega12, t));

    const ModeOperator cp = ph * (p.g * a + p.omega23 * id) / std::sqrt(2.0);
    const ModeOperator cm = std::conj(ph) * (p.g * a - p.omega23 * id) / std::sqrt(2.0);
    h.block(2 * dim, 0, dim, dim) = cp;
    h.block(2 * dim, dim, dim, dim) = cm;
    h.block(0, 2 * dim, dim, dim) = cp.adjoint();
    h.block(dim, 2 * dim, dim, dim) = cm.adjoint();
    return h;
}

Eigen::MatrixXcd hamiltonian_HK(double t, const SystemParams& p, int dim) {
    if (dim < 1)
        throw InvalidDimensionError("hamiltonian_HK: dim must be >= 1");
    const int n2 = 2 * dim;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n2, n2);
    const ModeOperator a = annihilation_matrix(dim);
    const double rd = p.r() * p.delta();
    const Complex ph = std::polar(1.0, -reduce_phase(p.delta(), t));

    h.block(0, 0, dim, dim) = rd * (ph * a + std::conj(ph) * a.adjoint());
    h.block(dim, dim, dim, dim) = rd * (std::conj(ph) * a + ph * a.adjoint());
    return h;
}

AtomFieldState magnus_UK(double t, const SystemParams& p, const AtomFieldState& state, Ordering ordering) {
    validate_state(state, "magnus_UK");
    if (state.basis != AtomBasis::two_level)
        throw DimensionMismatchError("magnus_UK: expects the two-level (ground doublet) basis");
    AtomFieldState out = state;
    magnus_on_ground(out, t, p, ordering);
    return out;
}

AtomFieldState analytic_UI(double t, const SystemParams& p, const AtomFieldState& state, Ordering ordering) {
    validate_state(state, "analytic_UI");
    if (!ground_manifold_only(state))
        throw DimensionMismatchError("analytic_UI: excited-level population must be zero");
    AtomFieldState out = state;
    magnus_on_ground(out, t, p, ordering);
    apply_u2(out, t, p, false);
    apply_u1(out, t, p, false);
    return out;
}

PropagationResult propagate_HI(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts) {
    validate_state(initial, "propagate_HI");
    if (initial.basis != AtomBasis::three_level)
        throw DimensionMismatchError("propagate_HI: expects the three-level basis");
    require_unit_norm(initial, "propagate_HI");
    if (t < 0.0)
        throw ConfigError("propagate_HI: negative time");

    const int dim = initial.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian_HI(p, dim));
    const Eigen::VectorXcd w0 = es.eigenvectors().adjoint() * stack(initial);

    // Exact one-shot solve: jump to any time directly through the spectrum.
    AdvanceFn advance = [&es, &w0](AtomFieldState& psi, double /*from*/, double to) {
        Eigen::VectorXcd w = w0;
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w[k] *= std::polar(1.0, -es.eigenvalues()[k] * to);
        unstack(es.eigenvectors() * w, psi);
    };

    RefFn ref;
    if (opts.compare_analytic && ground_manifold_only(initial)) {
        ref = [&p, &initial](double ts) {
            AtomFieldState r = analytic_uj(ts, p, initial);
            apply_u1(r, ts, p, false);
            return r;
        };
    }
    return sampled_run(initial, t, opts, advance, ref, nullptr);
}

PropagationResult propagate_HJ(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts) {
    validate_state(initial, "propagate_HJ");
    if (initial.basis != AtomBasis::three_level)
        throw DimensionMismatchError("propagate_HJ: expects the three-level basis");
    require_unit_norm(initial, "propagate_HJ");
    if (t < 0.0)
        throw ConfigError("propagate_HJ: negative time");

    const int dim = initial.dim();
    const long steps = opts.steps > 0 ? opts.steps : default_steps_hj(t, p);
    const double dt_target = t > 0.0 ? t / static_cast<double>(steps) : 1.0;
    long steps_done = 0;

    std::function<void(AtomFieldState&, double, double)> step_once;
    if (opts.stepper == Stepper::frame_factored) {
        // exp(-i H_J(tm) h) = U_1+(tm) exp(-i V_1 h) U_1(tm) with V_1 the
        // static coupling to the excited level; one eigendecomposition serves
        // every step.
        auto es = std::make_shared<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>>(
            hamiltonian_HJ(0.0, p, dim));
        auto cache = std::make_shared<std::pair<double, Eigen::VectorXcd>>(-1.0, Eigen::VectorXcd());
        step_once = [es, cache, p](AtomFieldState& psi, double t_mid, double h) {
            if (cache->first != h) {
                Eigen::VectorXcd ph(es->eigenvalues().size());
                for (Eigen::Index k = 0; k < ph.size(); ++k)
                    ph[k] = std::polar(1.0, -es->eigenvalues()[k] * h);
                *cache = {h, std::move(ph)};
            }
            apply_u1(psi, t_mid, p, false);
            Eigen::VectorXcd w = es->eigenvectors().adjoint() * stack(psi);
            w.array() *= cache->second.array();
            unstack(es->eigenvectors() * w, psi);
            apply_u1(psi, t_mid, p, true);
        };
    } else {
        step_once = eig_step([&p, dim](double tm) { return hamiltonian_HJ(tm, p, dim); });
    }

    RefFn ref;
    if (opts.compare_analytic && ground_manifold_only(initial))
        ref = [&p, &initial](double ts) { return analytic_uj(ts, p, initial); };

    AdvanceFn advance = stepping_advancer(dt_target, &steps_done, step_once);
    return sampled_run(initial, t, opts, advance, ref, &steps_done);
}

PropagationResult propagate_HK(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts) {
    validate_state(initial, "propagate_HK");
    if (initial.basis != AtomBasis::two_level)
        throw DimensionMismatchError("propagate_HK: expects the two-level basis");
    require_unit_norm(initial, "propagate_HK");
    if (t < 0.0)
        throw ConfigError("propagate_HK: negative time");

    const int dim = initial.dim();
    const long steps = opts.steps > 0 ? opts.steps : default_steps_hk(t, p);
    const double dt_target = t > 0.0 ? t / static_cast<double>(steps) : 1.0;
    long steps_done = 0;

    std::function<void(AtomFieldState&, double, double)> step_once;
    if (opts.stepper == Stepper::frame_factored) {
        // exp(-i H_K,pm(tm) h) = R_pm+(tm) exp(-i r delta (a + a+) h) R_pm(tm)
        // with R_pm(t) = exp(-+ i delta n t); the quadrature operator a + a+
        // is diagonalized once, in real arithmetic.
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = 1; n < dim; ++n) {
            x(n - 1, n) = std::sqrt(static_cast<double>(n));
            x(n, n - 1) = x(n - 1, n);
        }
        auto es = std::make_shared<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>>(x);
        auto cache = std::make_shared<std::pair<double, Eigen::VectorXcd>>(-1.0, Eigen::VectorXcd());
        const double rd = p.r() * p.delta();
        step_once = [es, cache, p, rd, dim](AtomFieldState& psi, double t_mid, double h) {
            if (cache->first != h) {
                Eigen::VectorXcd ph(dim);
                for (int k = 0; k < dim; ++k)
                    ph[k] = std::polar(1.0, -rd * es->eigenvalues()[k] * h);
                *cache = {h, std::move(ph)};
            }
            const double theta = reduce_phase(p.delta(), t_mid);
            Eigen::VectorXcd rot(dim);
            for (int n = 0; n < dim; ++n)
                rot[n] = std::polar(1.0, -fold_2pi(n * theta));

            for (int b = 0; b < 2; ++b) {
                Eigen::VectorXcd& c = psi.branches[b];
                if (b == 0)
                    c.array() *= rot.array();
                else
                    c.array() *= rot.array().conjugate();
                Eigen::VectorXcd w = es->eigenvectors().transpose() * c;
                w.array() *= cache->second.array();
                c = es->eigenvectors() * w;
                if (b == 0)
                    c.array() *= rot.array().conjugate();
                else
                    c.array() *= rot.array();
            }
        };
    } else {
        step_once = eig_step([&p, dim](double tm) { return hamiltonian_HK(tm, p, dim); });
    }

    RefFn ref;
    if (opts.compare_analytic)
        ref = [&p, &initial](double ts) { return magnus_UK(ts, p, initial, Ordering::with_ordering); };

    AdvanceFn advance = stepping_advancer(dt_target, &steps_done, step_once);
    return sampled_run(initial, t, opts, advance, ref, &steps_done);
}

AtomFieldState apply_frame_U1(double t, const SystemParams& p, const AtomFieldState& state, bool inverse) {
    validate_state(state, "apply_frame_U1");
    AtomFieldState out = state;
    apply_u1(out, t, p, inverse);
    return out;
}

AtomFieldState apply_frame_U2(double t, const SystemParams& p, const AtomFieldState& state, bool inverse) {
    validate_state(state, "apply_frame_U2");
    AtomFieldState out = state;
    apply_u2(out, t, p, inverse);
    return out;
}

double nested_commutator_norm(double t1, double t2, double t3, const SystemParams& p, int dim,
                              int boundary_rows) {
    if (dim < 3)
        throw InvalidDimensionError("nested_commutator_norm: dim must be >= 3");
    if (boundary_rows < 0 || dim - boundary_rows < 1)
        throw InvalidDimensionError("nested_commutator_norm: bad boundary_rows");

    const ModeOperator a = annihilation_matrix(dim);
    const double rd = p.r() * p.delta();
    const int m = dim - boundary_rows;

    double worst = 0.0;
    for (int branch = 0; branch < 2; ++branch) {
        const double sgn = branch == 0 ? 1.0 : -1.0;
        auto block = [&](double t) {
            const Complex ph = std::polar(1.0, -sgn * reduce_phase(p.delta(), t));
            return ModeOperator(rd * (ph * a + std::conj(ph) * a.adjoint()));
        };
        const ModeOperator b1 = block(t1), b2 = block(t2), b3 = block(t3);
        const ModeOperator inner = b2 * b3 - b3 * b2;
        const ModeOperator outer = b1 * inner - inner * b1;
        Eigen::JacobiSVD<ModeOperator> svd(outer.topLeftCorner(m, m));
        worst = std::max(worst, svd.singularValues()(0));
    }
    return worst;
}

} // namespace oal
