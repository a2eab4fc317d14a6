// SPDX-License-Identifier: Apache-2.0
//
// bianm: gridless one-bit channel estimation via binary atomic norm minimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Binary atomic norm minimization.
//
// The estimator solves
//
//   min  (1/2mn) tr(W T(u)) + delta/2
//   s.t. [[T(u), h], [h^H, delta]] >= 0
//        Re(r) .* Re(Phi h) >= 0,  Im(r) .* Im(Phi h) >= 0
//        |Re(Phi h)|_1 + |Im(Phi h)|_1 = 1
//
// with W = I (plain) or W = (T(u_prev) + zeta I)^{-1} (reweighted). In the
// sign-aligned coordinates w = [Re(r).*Re(Phi h); Im(r).*Im(Phi h)] the three
// measurement constraints are exactly w in the probability simplex, so the
// problem splits into a PSD block and a simplex block coupled to (u, h, delta)
// by linear constraints. ADMM on that splitting needs one Hermitian
// eigendecomposition and one sort per iteration; every other update is closed
// form.

#ifndef BIANM_ANM_SOLVER_HPP_
#define BIANM_ANM_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bianm/channel_sim.hpp"
#include "bianm/tensor_atoms.hpp"

namespace bianm {

struct SolverParams {
    double rho = 1.0;
    int max_iters = 5000;
    double tol_primal = 1e-4;
    double tol_dual = 1e-4;
    int reweight_iters = 5;  // J
    double zeta0 = 1.0;
    double zeta_decay = 0.5;
    // Residual balancing: rho is doubled (halved) when the primal residual
    // exceeds (falls below) the dual residual by a factor of 10.
    bool adaptive_rho = false;
    // ADMM over-relaxation factor in [1, 2); 1 is the plain iteration.
    double relaxation = 1.0;

    void validate() const {
        if (!(rho > 0.0)) throw InvalidArgument("SolverParams: rho must be positive");
        if (max_iters < 1) throw InvalidArgument("SolverParams: max_iters must be positive");
        if (!(tol_primal > 0.0) || !(tol_dual > 0.0)) {
            throw InvalidArgument("SolverParams: tolerances must be positive");
        }
        if (reweight_iters < 0) throw InvalidArgument("SolverParams: reweight_iters must be nonnegative");
        if (!(relaxation >= 1.0 && relaxation < 2.0)) {
            throw InvalidArgument("SolverParams: relaxation must lie in [1, 2)");
        }
        if (!(zeta0 > 0.0)) throw InvalidArgument("SolverParams: zeta0 must be positive");
        if (!(zeta_decay > 0.0 && zeta_decay < 1.0)) {
            throw InvalidArgument("SolverParams: zeta_decay must lie in (0, 1)");
        }
    }

    /// zeta_j = zeta0 * zeta_decay^(j-1), j = 1..J.
    [[nodiscard]] std::vector<double> zeta_schedule() const {
        std::vector<double> z;
        double v = zeta0;
        for (int j = 0; j < reweight_iters; ++j, v *= zeta_decay) z.push_back(v);
        return z;
    }
};

/// Full ADMM iterate. Carried between solves so the reweighted stages can
/// warm-start from the previous stage.
struct SplittingState {
    ToeplitzGenerator gen;
    CVector h;
    double delta = 1.0;
    CMatrix z;       // PSD block, order mn+1
    CMatrix lambda;  // scaled dual of the PSD coupling
    RVector w;       // simplex block, length 2mn
    RVector mu;      // scaled dual of the simplex coupling
    double rho = 1.0;
};

struct SolveResult {
    CVector h_hat;  // unit l2 norm
    CVector h_raw;  // pre-normalization estimate, feasible for the measurement constraints
    ToeplitzGenerator gen;
    double delta = 0.0;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;
    SplittingState state;
};

/// Euclidean projection onto {v >= 0, sum(v) = radius} by sort and threshold.
inline RVector simplex_project(const RVector& w, double radius = 1.0) {
    if (!(radius > 0.0)) throw InvalidArgument("simplex_project: radius must be positive");
    const Eigen::Index n = w.size();
    if (n == 0) throw InvalidArgument("simplex_project: empty input");
    std::vector<double> u(w.data(), w.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumsum += u[static_cast<std::size_t>(j)];
        const double t = (cumsum - radius) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
    }
    return (w.array() - theta).cwiseMax(0.0).matrix();
}

/// The real-linear bijection h <-> w = [Re(r).*Re(Phi h); Im(r).*Im(Phi h)].
class SignAlignedCoordinates {
 public:
    SignAlignedCoordinates(const OneBitObservation& obs, Dims dims)
        : phi_(obs.pilot, dims), r_re_(obs.r.real()), r_im_(obs.r.imag()) {
        if (obs.r.size() != dims.size()) {
            throw InvalidArgument("observation length " + std::to_string(obs.r.size()) +
                                  " does not match m*n = " + std::to_string(dims.size()));
        }
        for (Eigen::Index i = 0; i < obs.r.size(); ++i) {
            if (std::abs(r_re_(i)) != 1.0 || std::abs(r_im_(i)) != 1.0) {
                throw InvalidArgument("observation entries must lie in {+-1 +- j}");
            }
        }
    }

    [[nodiscard]] RVector to_aligned(const CVector& h) const {
        const CVector y = phi_.apply(h);
        const Eigen::Index n = y.size();
        RVector w(2 * n);
        w.head(n) = r_re_.cwiseProduct(y.real());
        w.tail(n) = r_im_.cwiseProduct(y.imag());
        return w;
    }

    [[nodiscard]] CVector from_aligned(const RVector& w) const {
        const Eigen::Index n = r_re_.size();
        CVector y(n);
        y.real() = r_re_.cwiseProduct(w.head(n));
        y.imag() = r_im_.cwiseProduct(w.tail(n));
        return phi_.adjoint(y);
    }

    [[nodiscard]] const MeasurementOperator& phi() const { return phi_; }

 private:
    MeasurementOperator phi_;
    RVector r_re_;
    RVector r_im_;
};

/// Signed violation of the measurement constraints at h: the most negative
/// aligned coordinate (0 if none) and the l1 normalization gap.
struct FeasibilityReport {
    double min_aligned = 0.0;
    double l1_gap = 0.0;
};

inline FeasibilityReport feasibility(const OneBitObservation& obs, Dims dims, const CVector& h) {
    const SignAlignedCoordinates coords(obs, dims);
    const CVector y = coords.phi().apply(h);
    const RVector w = coords.to_aligned(h);
    const double l1 = y.real().cwiseAbs().sum() + y.imag().cwiseAbs().sum();
    return {std::min(0.0, w.minCoeff()), std::abs(l1 - 1.0)};
}

namespace detail {

inline void toeplitz_into(const ToeplitzGenerator& gen, Eigen::Ref<CMatrix> out) {
    const Dims d = gen.dims();
    for (int n2 = 0; n2 < d.n; ++n2) {
        for (int m2 = 0; m2 < d.m; ++m2) {
            const int col = d.index(m2, n2);
            for (int n1 = 0; n1 < d.n; ++n1) {
                for (int m1 = 0; m1 < d.m; ++m1) {
                    out(d.index(m1, n1), col) = gen.value(m1 - m2, n1 - n2);
                }
            }
        }
    }
}

/// Linear objective of the generator block: toeplitz_adjoint(W) / (2mn).
inline ToeplitzGenerator trace_cost(const HermitianMatrix& weight, Dims dims) {
    return (0.5 / dims.size()) * toeplitz_adjoint(weight, dims);
}

inline SplittingState initial_state(const SignAlignedCoordinates& coords, Dims dims, double rho) {
    const int n = dims.size();
    SplittingState s;
    s.gen = ToeplitzGenerator::identity(dims, 1.0);
    s.w = RVector::Constant(2 * n, 1.0 / (2.0 * n));
    s.h = coords.from_aligned(s.w);
    s.delta = 1.0;
    CMatrix b(n + 1, n + 1);
    toeplitz_into(s.gen, b.topLeftCorner(n, n));
    b.col(n).head(n) = s.h;
    b.row(n).head(n) = s.h.adjoint();
    b(n, n) = s.delta;
    s.z = psd_project(HermitianMatrix(b)).entries();
    s.lambda = CMatrix::Zero(n + 1, n + 1);
    s.mu = RVector::Zero(2 * n);
    s.rho = rho;
    return s;
}

/// Runs ADMM iterations on `state` for the objective <cost, gen> + delta/2.
/// Appends to result's trace and iteration count; returns true on convergence.
inline bool run_splitting(const SignAlignedCoordinates& coords, Dims dims, const ToeplitzGenerator& cost,
                          const SolverParams& params, SplittingState& s, SolveResult& result) {
    const int n = dims.size();
    const CVector& pd = coords.phi().diagonal();
    CMatrix b(n + 1, n + 1);
    CMatrix v(n + 1, n + 1);

    for (int it = 0; it < params.max_iters; ++it) {
        const double rho = s.rho;
        v = s.z - s.lambda;

        // Generator: per-diagonal mean of the target minus the objective step.
        const ToeplitzGenerator sums = toeplitz_adjoint(HermitianMatrix(v.topLeftCorner(n, n)), dims);
        s.gen.for_each_coefficient([&](int k, int l, std::size_t i) {
            s.gen[i] = (sums[i] - cost[i] / rho) / static_cast<double>(s.gen.diagonal_length(k, l));
        });
        s.gen[0].imag(0.0);

        s.delta = v(n, n).real() - 0.5 / rho;

        // h sees the border of the PSD block twice and the simplex block once.
        const CVector qy = coords.phi().apply(coords.from_aligned(s.w - s.mu));
        const CVector y = (2.0 * pd.cwiseProduct(v.col(n).head(n)) + qy) / 3.0;
        s.h = coords.phi().adjoint(y);

        toeplitz_into(s.gen, b.topLeftCorner(n, n));
        b.col(n).head(n) = s.h;
        b.row(n).head(n) = s.h.adjoint();
        b(n, n) = s.delta;
        const RVector sh = coords.to_aligned(s.h);

        const CMatrix z_old = s.z;
        const RVector w_old = s.w;
        const double a = params.relaxation;
        const CMatrix b_rel = a * b + (1.0 - a) * z_old;
        const RVector sh_rel = a * sh + (1.0 - a) * w_old;
        s.z = psd_project(HermitianMatrix(b_rel + s.lambda)).entries();
        s.w = simplex_project(sh_rel + s.mu, 1.0);

        s.lambda += b_rel - s.z;
        s.mu += sh_rel - s.w;

        const double primal = std::sqrt((b - s.z).squaredNorm() + (sh - s.w).squaredNorm());
        const double dual = rho * std::sqrt((s.z - z_old).squaredNorm() + (s.w - w_old).squaredNorm());
        const double objective = inner(cost, s.gen) + 0.5 * s.delta;

        if (!std::isfinite(primal) || !std::isfinite(dual) || !std::isfinite(objective)) {
            throw Divergence("splitting solver produced non-finite iterates; try a smaller rho");
        }

        result.objective_trace.push_back(objective);
        result.primal_residual = primal;
        result.dual_residual = dual;
        ++result.iterations;

        if (primal <= params.tol_primal && dual <= params.tol_dual) return true;

        if (params.adaptive_rho) {
            if (primal > 10.0 * dual) {
                s.rho *= 2.0;
                s.lambda /= 2.0;
                s.mu /= 2.0;
            } else if (dual > 10.0 * primal) {
                s.rho /= 2.0;
                s.lambda *= 2.0;
                s.mu *= 2.0;
            }
        }
    }
    return false;
}

/// The estimate is read off the simplex block, which satisfies the measurement
/// constraints exactly.
inline void finalize(const SignAlignedCoordinates& coords, SolveResult& result) {
    const SplittingState& s = result.state;
    result.h_raw = coords.from_aligned(s.w);
    const double norm = result.h_raw.norm();
    if (!(norm > 0.0)) throw DegenerateSolution("solver terminated at h = 0");
    result.h_hat = result.h_raw / norm;
    result.gen = s.gen;
    result.delta = s.delta;
}

}  // namespace detail

/// Plain binary atomic norm minimization.
inline SolveResult solve_bianm(const OneBitObservation& obs, Dims dims, const SolverParams& params = {}) {
    params.validate();
    const SignAlignedCoordinates coords(obs, dims);
    SolveResult result;
    result.state = detail::initial_state(coords, dims, params.rho);
    const ToeplitzGenerator cost = detail::trace_cost(HermitianMatrix::identity(dims.size()), dims);
    result.converged = detail::run_splitting(coords, dims, cost, params, result.state, result);
    detail::finalize(coords, result);
    return result;
}

/// Theta = (T(gen_prev) + zeta I)^{-1}.
inline HermitianMatrix reweight_matrix(const ToeplitzGenerator& gen_prev, double zeta) {
    if (!(zeta > 0.0)) throw InvalidArgument("reweight_matrix: zeta must be positive");
    return hermitian_solve(toeplitz_from_generator(gen_prev), zeta);
}

/// The J reweighted stages following a plain solve. Each stage swaps only the
/// generator cost for toeplitz_adjoint(Theta_j)/(2mn) and warm-starts from the
/// previous stage; the constraint path is shared with solve_bianm.
inline SolveResult refine_reweighted(const OneBitObservation& obs, Dims dims, const SolverParams& params,
                                     const SolveResult& initial) {
    params.validate();
    const SignAlignedCoordinates coords(obs, dims);
    SolveResult result = initial;
    bool all_converged = initial.converged;
    for (double zeta : params.zeta_schedule()) {
        const HermitianMatrix theta = reweight_matrix(result.state.gen, zeta);
        const ToeplitzGenerator cost = detail::trace_cost(theta, dims);
        all_converged = detail::run_splitting(coords, dims, cost, params, result.state, result) && all_converged;
    }
    result.converged = all_converged;
    detail::finalize(coords, result);
    return result;
}

/// Reweighted binary atomic norm minimization: one plain solve followed by
/// params.reweight_iters reweighted stages.
inline SolveResult solve_rebianm(const OneBitObservation& obs, Dims dims, const SolverParams& params = {}) {
    if (params.reweight_iters < 1) throw InvalidArgument("solve_rebianm: reweight_iters must be >= 1");
    return refine_reweighted(obs, dims, params, solve_bianm(obs, dims, params));
}

/// |h_hat - h|^2 / |h|^2 for unit-norm inputs.
inline double nmse(const CVector& h_hat, const CVector& h) {
    if (h_hat.size() != h.size()) throw InvalidArgument("nmse: length mismatch");
    constexpr double kUnitTol = 1e-8;
    if (std::abs(h_hat.norm() - 1.0) > kUnitTol || std::abs(h.norm() - 1.0) > kUnitTol) {
        throw InvalidArgument("nmse: inputs must have unit l2 norm");
    }
    return (h_hat - h).squaredNorm() / h.squaredNorm();
}

}  // namespace bianm

#endif  // BIANM_ANM_SOLVER_HPP_
