#pragma once

// TBA on the extended D_N diagram:
//
//   eps_a(b) = rho_a(b) - sum_c I_ac  int db' L_c(b') / (2 pi cosh(b - b')),
//   L = log(1 + e^{-eps}),
//   c(R) = 3/pi^2 int sum_a rho_a L_a.
//
// Convolutions use FFTW on the zero-padded trapezoid sum. Nodes without a
// source keep a finite plateau L_c(+-B) beyond the grid; its contribution
// L_c(+-B) arctan(e^{-(B -+ b)})/pi is added analytically.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "heunflow/error.hpp"

namespace heunflow {

enum class Source { massless_flow, massive_sausage };

inline const char* to_string(Source s) { return s == Source::massless_flow ? "flow" : "sausage"; }

struct DynkinIncidence {
    int N = 0;
    std::vector<std::vector<int>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    int degree(int a) const {
        int d = 0;
        for (int v : adjacency[static_cast<std::size_t>(a)]) d += v;
        return d;
    }
};

/// Fork-chain-fork graph on nodes 0..N: 0-2, 1-2, 2-3, ..., (N-2)-(N-1), (N-2)-N.
inline DynkinIncidence build_incidence(int N) {
    detail::require(N >= 4, "build_incidence: N must be >= 4 (the extended D_3 graph is ambiguous)");
    DynkinIncidence g;
    g.N = N;
    g.adjacency.assign(static_cast<std::size_t>(N + 1), std::vector<int>(static_cast<std::size_t>(N + 1), 0));
    auto link = [&](int a, int b) {
        g.adjacency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
        g.adjacency[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
    };
    link(0, 2);
    link(1, 2);
    for (int k = 2; k < N - 2; ++k) link(k, k + 1);
    link(N - 2, N - 1);
    link(N - 2, N);
    return g;
}

/// log(1 + e^{-x}) without overflow.
inline double log1p_exp_neg(double x) { return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

struct TbaGrid {
    double B = 0.0;      // <= 0: default for the given N, MR
    std::size_t M = 0;   // 0: smallest power of two >= 512 with step <= 0.1
};

inline double default_tba_halfwidth(int N, double MR) { return std::max(25.0, std::abs(std::log(MR)) + 6.0 * (N + 2)); }

inline std::size_t default_tba_points(double B) {
    std::size_t M = 512;
    while (2.0 * B / static_cast<double>(M - 1) > 0.1) M *= 2;
    return M;
}

struct TbaOptions {
    TbaGrid grid;
    double tol = 1e-12;
    long max_iter = 100000;
    bool kernel = true;                            // false decouples the nodes
    const std::vector<std::vector<double>>* initial = nullptr;  // warm start (same grid)
};

struct TbaSolution {
    int N = 0;
    double MR = 0.0;
    Source source = Source::massless_flow;
    double B = 0.0;
    double h = 0.0;
    std::vector<double> beta;
    std::vector<std::vector<double>> eps;   // (N+1) x M
    std::vector<std::vector<double>> rho;
    double c = 0.0;
    long iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Linear convolution of trapezoid-weighted samples with the sech kernel.
class SechConvolver {
public:
    SechConvolver(std::size_t M, double h) : M_(M) {
        nfft_ = 1;
        // circular length >= 2M-1 keeps outputs M-1..2M-2 free of wraparound
        while (nfft_ < 2 * M - 1) nfft_ *= 2;
        nc_ = nfft_ / 2 + 1;
        in_ = fftw_alloc_real(nfft_);
        out_ = fftw_alloc_complex(nc_);
        kf_ = fftw_alloc_complex(nc_);
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(nfft_), in_, out_, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(nfft_), out_, in_, FFTW_ESTIMATE);
        }
        std::fill(in_, in_ + nfft_, 0.0);
        for (std::size_t k = 0; k + 1 < 2 * M; ++k) {
            const double x = (static_cast<double>(k) - static_cast<double>(M - 1)) * h;
            in_[k] = 1.0 / (2.0 * M_PI * std::cosh(x));
        }
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < nc_; ++k) {
            kf_[k][0] = out_[k][0];
            kf_[k][1] = out_[k][1];
        }
        weights_.assign(M, h);
        weights_.front() = weights_.back() = 0.5 * h;
    }
    SechConvolver(const SechConvolver&) = delete;
    SechConvolver& operator=(const SechConvolver&) = delete;
    ~SechConvolver() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
        fftw_free(kf_);
    }

    // out[i] = sum_j w_j f_j K(b_i - b_j)
    void apply(const std::vector<double>& f, std::vector<double>& out) {
        std::fill(in_, in_ + nfft_, 0.0);
        for (std::size_t j = 0; j < M_; ++j) in_[j] = f[j] * weights_[j];
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < nc_; ++k) {
            const double ar = out_[k][0], ai = out_[k][1];
            const double br = kf_[k][0], bi = kf_[k][1];
            out_[k][0] = ar * br - ai * bi;
            out_[k][1] = ar * bi + ai * br;
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(nfft_);
        out.resize(M_);
        for (std::size_t i = 0; i < M_; ++i) out[i] = in_[i + M_ - 1] * scale;
    }

    const std::vector<double>& weights() const { return weights_; }

private:
    std::size_t M_, nfft_, nc_;
    double* in_;
    fftw_complex* out_;
    fftw_complex* kf_;
    fftw_plan fwd_, bwd_;
    std::vector<double> weights_;
};

inline std::vector<std::vector<double>> tba_sources(int N, double MR, Source source, const std::vector<double>& beta) {
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(N + 1), std::vector<double>(beta.size(), 0.0));
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (source == Source::massless_flow) {
            rho[0][i] = 0.5 * MR * std::exp(beta[i]);
            rho[static_cast<std::size_t>(N)][i] = 0.5 * MR * std::exp(-beta[i]);
        } else {
            rho[0][i] = MR * std::cosh(beta[i]);
        }
    }
    return rho;
}

}  // namespace detail

/// c = 3/pi^2 sum_a int rho_a log(1 + e^{-eps_a}) by the trapezoid rule.
inline double central_charge(const TbaSolution& sol) {
    double acc = 0.0;
    const std::size_t M = sol.beta.size();
    for (std::size_t a = 0; a < sol.eps.size(); ++a)
        for (std::size_t i = 0; i < M; ++i) {
            const double r = sol.rho[a][i];
            if (r == 0.0) continue;
            const double w = (i == 0 || i + 1 == M) ? 0.5 * sol.h : sol.h;
            acc += w * r * log1p_exp_neg(sol.eps[a][i]);
        }
    return 3.0 / (M_PI * M_PI) * acc;
}

/// Picard iteration from eps = rho (or a warm start), damped by 1/2 once the
/// residual starts to oscillate; stops when the sup-norm of F(eps) - eps,
/// relative to max(1, |F(eps)|), drops below tol, and returns that eps.
inline TbaSolution solve_tba(int N, double MR, Source source, const TbaOptions& opt = {}) {
    const DynkinIncidence g = build_incidence(N);
    detail::require(std::isfinite(MR) && MR > 0.0, "solve_tba: MR must be positive");
    detail::require(opt.tol > 0.0, "solve_tba: tol must be positive");
    const double B = opt.grid.B > 0.0 ? opt.grid.B : default_tba_halfwidth(N, MR);
    const std::size_t M = opt.grid.M > 0 ? opt.grid.M : default_tba_points(B);
    detail::require(M >= 512, "solve_tba: M must be >= 512");
    const double edge_source = (source == Source::massless_flow) ? 0.5 * MR * std::exp(B) : MR * std::cosh(B);
    detail::require(edge_source > 30.0, "solve_tba: B too small, source must exceed 30 at the grid edge");

    TbaSolution sol;
    sol.N = N;
    sol.MR = MR;
    sol.source = source;
    sol.B = B;
    sol.h = 2.0 * B / static_cast<double>(M - 1);
    sol.beta.resize(M);
    for (std::size_t i = 0; i < M; ++i) sol.beta[i] = -B + static_cast<double>(i) * sol.h;
    sol.rho = detail::tba_sources(N, MR, source, sol.beta);
    const std::size_t nodes = static_cast<std::size_t>(N + 1);
    if (opt.initial) {
        detail::require(opt.initial->size() == nodes && (*opt.initial)[0].size() == M,
                        "solve_tba: warm start has the wrong shape");
        sol.eps = *opt.initial;
    } else {
        sol.eps = sol.rho;
    }

    std::vector<double> tailR(M), tailL(M);
    for (std::size_t i = 0; i < M; ++i) {
        tailR[i] = std::atan(std::exp(-(B - sol.beta[i]))) / M_PI;
        tailL[i] = std::atan(std::exp(-(B + sol.beta[i]))) / M_PI;
    }

    std::unique_ptr<detail::SechConvolver> conv;
    if (opt.kernel) conv = std::make_unique<detail::SechConvolver>(M, sol.h);

    std::vector<std::vector<std::size_t>> nbrs(nodes);
    for (std::size_t a = 0; a < nodes; ++a)
        for (std::size_t b = 0; b < nodes; ++b)
            if (g.adjacency[a][b]) nbrs[a].push_back(b);

    std::vector<std::vector<double>> Lc(nodes, std::vector<double>(M)), C(nodes, std::vector<double>(M, 0.0));
    std::vector<std::vector<double>> next(nodes, std::vector<double>(M));
    double damp = 1.0;
    double prev_res = std::numeric_limits<double>::infinity();
    int rises = 0;
    double res = std::numeric_limits<double>::infinity();
    long it = 0;
    while (it < opt.max_iter) {
        ++it;
        if (opt.kernel) {
            for (std::size_t b = 0; b < nodes; ++b) {
                for (std::size_t i = 0; i < M; ++i) Lc[b][i] = log1p_exp_neg(sol.eps[b][i]);
                conv->apply(Lc[b], C[b]);
                for (std::size_t i = 0; i < M; ++i) C[b][i] += Lc[b][M - 1] * tailR[i] + Lc[b][0] * tailL[i];
            }
        }
        res = 0.0;
        for (std::size_t a = 0; a < nodes; ++a) {
            for (std::size_t i = 0; i < M; ++i) {
                double v = sol.rho[a][i];
                if (opt.kernel)
                    for (std::size_t b : nbrs[a]) v -= C[b][i];
                next[a][i] = v;
                res = std::max(res, std::abs(v - sol.eps[a][i]) / std::max(1.0, std::abs(v)));
            }
        }
        // keep the iterate the residual was measured on
        if (res < opt.tol) break;
        for (std::size_t a = 0; a < nodes; ++a)
            for (std::size_t i = 0; i < M; ++i)
                sol.eps[a][i] = (damp == 1.0) ? next[a][i] : sol.eps[a][i] + damp * (next[a][i] - sol.eps[a][i]);
        if (res > prev_res) {
            if (++rises >= 3 && damp == 1.0) damp = 0.5;
        } else {
            rises = 0;
        }
        prev_res = res;
    }
    sol.iterations = it;
    sol.residual = res;
    if (!(res < opt.tol))
        throw ConvergenceError("solve_tba: no convergence after " + std::to_string(opt.max_iter) + " iterations",
                               res);
    sol.c = central_charge(sol);
    return sol;
}

struct CurvePoint {
    double x = 0.0;   // MR, or u
    double y = 0.0;   // c, or kappa0
    long iterations = 0;
    double residual = 0.0;
};

struct FlowCurve {
    enum class Kind { central_charge, kappa0 } kind = Kind::central_charge;
    int N = 0;
    std::vector<CurvePoint> points;
};

/// Grid shared by a whole curve so that each point can warm-start the next.
inline TbaGrid curve_grid(int N, const std::vector<double>& MR_list) {
    TbaGrid g;
    for (double mr : MR_list) g.B = std::max(g.B, default_tba_halfwidth(N, mr));
    g.M = default_tba_points(g.B);
    return g;
}

/// c(MR) along an increasing MR list, each solve warm-started from the last.
inline FlowCurve central_charge_curve(int N, const std::vector<double>& MR_list, Source source,
                                      TbaOptions opt = {}) {
    detail::require(!MR_list.empty(), "central_charge_curve: empty MR list");
    for (std::size_t i = 1; i < MR_list.size(); ++i)
        detail::require(MR_list[i] > MR_list[i - 1], "central_charge_curve: MR list must be strictly increasing");
    if (opt.grid.B <= 0.0) opt.grid = curve_grid(N, MR_list);
    FlowCurve curve;
    curve.kind = FlowCurve::Kind::central_charge;
    curve.N = N;
    std::vector<std::vector<double>> warm;
    // IR points converge fastest, so sweep from the largest MR down.
    std::vector<CurvePoint> pts(MR_list.size());
    for (std::size_t k = MR_list.size(); k-- > 0;) {
        TbaOptions o = opt;
        if (!warm.empty()) o.initial = &warm;
        TbaSolution s = solve_tba(N, MR_list[k], source, o);
        pts[k] = {MR_list[k], s.c, s.iterations, s.residual};
        warm = std::move(s.eps);
    }
    curve.points = std::move(pts);
    return curve;
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    detail::require(lo > 0.0 && hi > lo && n >= 2, "log_spaced: need 0 < lo < hi and n >= 2");
    std::vector<double> v(n);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

struct IrFit {
    double b2 = 0.0;
    double b3 = 0.0;
    double condition = 0.0;
    std::size_t points = 0;
};

/// Least squares of c - (2 - 6/(N+2)) on X^{8/(N+2)} and X^{12/(N+2)},
/// X = (N+2)/MR, over the curve points with MR >= 100.
inline IrFit fit_ir_coeffs(const FlowCurve& curve, int N, double min_mr = 100.0) {
    detail::require(N >= 4, "fit_ir_coeffs: N must be >= 4");
    const double cir = 2.0 - 6.0 / (N + 2);
    std::vector<double> f1, f2, y;
    for (const auto& p : curve.points) {
        if (p.x < min_mr) continue;
        const double X = (N + 2) / p.x;
        f1.push_back(std::pow(X, 8.0 / (N + 2)));
        f2.push_back(std::pow(X, 12.0 / (N + 2)));
        y.push_back(p.y - cir);
    }
    detail::require(y.size() >= 6, "fit_ir_coeffs: need at least 6 points with MR >= 100");
    // QR by Gram-Schmidt on the two columns.
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    const double r11 = std::sqrt(dot(f1, f1));
    std::vector<double> q1(f1.size()), q2(f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) q1[i] = f1[i] / r11;
    const double r12 = dot(q1, f2);
    for (std::size_t i = 0; i < f2.size(); ++i) q2[i] = f2[i] - r12 * q1[i];
    const double r22 = std::sqrt(dot(q2, q2));
    // singular values of R = [[r11, r12], [0, r22]]
    const double fro2 = r11 * r11 + r12 * r12 + r22 * r22;
    const double det = std::abs(r11 * r22);
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double smax = std::sqrt(0.5 * (fro2 + disc));
    const double smin = det / smax;
    IrFit fit;
    fit.points = y.size();
    fit.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(fit.condition < 1e10)) throw DomainError("fit_ir_coeffs: ill-conditioned design matrix");
    for (std::size_t i = 0; i < q2.size(); ++i) q2[i] /= r22;
    const double z1 = dot(q1, y), z2 = dot(q2, y);
    fit.b3 = z2 / r22;
    fit.b2 = (z1 - r12 * fit.b3) / r11;
    return fit;
}

/// CSV dump `beta,eps_0,...,eps_N`.
inline void write_pseudo_energies(std::ostream& os, const TbaSolution& sol) {
    os << "beta";
    for (std::size_t a = 0; a < sol.eps.size(); ++a) os << ",eps_" << a;
    os << '\n';
    char buf[64];
    for (std::size_t i = 0; i < sol.beta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", sol.beta[i]);
        os << buf;
        for (const auto& e : sol.eps) {
            std::snprintf(buf, sizeof buf, ",%.17g", e[i]);
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace heunflow
