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

#ifndef BIANM_CHANNEL_SIM_HPP_
#define BIANM_CHANNEL_SIM_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bianm/tensor_atoms.hpp"

namespace bianm {

struct Path {
    Complex gain;
    double theta = 0.0;  // normalized angle of arrival
    double tau = 0.0;    // normalized delay
};

struct PathSet {
    std::vector<Path> paths;

    [[nodiscard]] std::size_t size() const { return paths.size(); }
};

/// Distance between two normalized frequencies on the unit circle.
inline double wrap_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

/// Smallest pairwise wrap-around separation in theta and in tau. Both are +inf
/// for a single path.
inline std::pair<double, double> min_separation(const PathSet& ps) {
    double st = std::numeric_limits<double>::infinity();
    double su = st;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            st = std::min(st, wrap_distance(ps.paths[i].theta, ps.paths[j].theta));
            su = std::min(su, wrap_distance(ps.paths[i].tau, ps.paths[j].tau));
        }
    }
    return {st, su};
}

inline constexpr int kSeparationRetryBudget = 10000;

/// Draws L paths with CN(0,1) gains and uniform angles and delays. With min_sep,
/// whole path sets are redrawn until every pair is at least 1/m apart in theta
/// and 1/n apart in tau (wrap-around distance).
template <std::uniform_random_bit_generator Rng>
PathSet sample_paths(int l, Dims dims, bool min_sep, Rng& rng) {
    if (l < 1) throw InvalidArgument("sample_paths: path count must be >= 1");
    if (l > std::min(dims.m, dims.n)) {
        throw InvalidArgument("sample_paths: path count " + std::to_string(l) + " exceeds min(m, n)");
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double sep_theta = 1.0 / dims.m;
    const double sep_tau = 1.0 / dims.n;

    for (int attempt = 0; attempt < kSeparationRetryBudget; ++attempt) {
        PathSet ps;
        ps.paths.reserve(static_cast<std::size_t>(l));
        for (int i = 0; i < l; ++i) {
            Path p;
            const double re = gauss(rng);
            const double im = gauss(rng);
            p.gain = Complex(re, im);
            // uniform_real_distribution may return 1.0 on some libraries
            p.theta = std::fmod(unif(rng), 1.0);
            p.tau = std::fmod(unif(rng), 1.0);
            ps.paths.push_back(p);
        }
        if (!min_sep) return ps;
        const auto [st, su] = min_separation(ps);
        if (st >= sep_theta && su >= sep_tau) return ps;
    }
    throw InfeasibleSeparation("sample_paths: could not place " + std::to_string(l) +
                               " separated paths within the retry budget");
}

/// Unit-norm vectorized channel h = vec(H) together with the rescaled paths
/// that generate it.
struct ChannelRealization {
    Dims dims;
    CVector h;
    PathSet paths;

    /// m x n view of h (column-major, antenna index fastest).
    [[nodiscard]] Eigen::Map<const CMatrix> matrix() const { return {h.data(), dims.m, dims.n}; }
};

inline ChannelRealization build_channel(const PathSet& paths, Dims dims) {
    CVector h = CVector::Zero(dims.size());
    for (const auto& p : paths.paths) {
        h += p.gain * build_atom(p.theta, p.tau, dims).vector;
    }
    const double norm = h.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DegenerateChannel("build_channel: channel vector has zero norm");
    }
    ChannelRealization ch{dims, h / norm, paths};
    for (auto& p : ch.paths.paths) p.gain /= norm;
    return ch;
}

/// Per-subcarrier pilot symbols x (X = diag(x)), all of unit modulus.
class PilotConfig {
 public:
    PilotConfig() = default;

    explicit PilotConfig(CVector x) : x_(std::move(x)) {
        for (Eigen::Index i = 0; i < x_.size(); ++i) {
            if (std::abs(std::abs(x_(i)) - 1.0) > 1e-12) {
                throw InvalidArgument("PilotConfig: pilot symbols must have unit modulus");
            }
        }
    }

    static PilotConfig all_ones(int n) { return PilotConfig(CVector::Ones(n)); }

    /// Uniform QPSK symbols exp(j pi (2q+1)/4), q in {0,1,2,3}.
    template <std::uniform_random_bit_generator Rng>
    static PilotConfig random_qpsk(int n, Rng& rng) {
        std::uniform_int_distribution<int> q(0, 3);
        CVector x(n);
        for (int b = 0; b < n; ++b) {
            x(b) = std::polar(1.0, std::numbers::pi * (2 * q(rng) + 1) / 4.0);
        }
        return PilotConfig(x);
    }

    [[nodiscard]] const CVector& symbols() const { return x_; }
    [[nodiscard]] int size() const { return static_cast<int>(x_.size()); }

 private:
    CVector x_;
};

/// h -> Phi h with Phi = X^T (x) I_m. Since X is diagonal this scales column b
/// of H by x_b; nothing of size (mn)^2 is ever formed.
class MeasurementOperator {
 public:
    MeasurementOperator(const PilotConfig& pilot, Dims dims) : dims_(dims), diag_(dims.size()) {
        if (pilot.size() != dims.n) {
            throw InvalidArgument("MeasurementOperator: pilot length " + std::to_string(pilot.size()) +
                                  " does not match n = " + std::to_string(dims.n));
        }
        for (int b = 0; b < dims.n; ++b) {
            diag_.segment(static_cast<Eigen::Index>(b) * dims.m, dims.m).setConstant(pilot.symbols()(b));
        }
    }

    [[nodiscard]] CVector apply(const CVector& h) const { return diag_.cwiseProduct(h); }
    [[nodiscard]] CVector adjoint(const CVector& y) const { return diag_.conjugate().cwiseProduct(y); }
    [[nodiscard]] const CVector& diagonal() const { return diag_; }
    [[nodiscard]] Dims dims() const { return dims_; }

 private:
    Dims dims_;
    CVector diag_;
};

inline MeasurementOperator measurement_operator(const PilotConfig& pilot, Dims dims) {
    return MeasurementOperator(pilot, dims);
}

/// sign() on real and imaginary parts separately, with sign(0) = +1.
inline Complex quantize(Complex y) {
    return {y.real() >= 0.0 ? 1.0 : -1.0, y.imag() >= 0.0 ? 1.0 : -1.0};
}

inline CVector quantize(const CVector& y) {
    CVector r(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) r(i) = quantize(y(i));
    return r;
}

/// Majority of an odd number of +-1 votes.
inline double majority(std::span<const double> votes) {
    if (votes.empty() || votes.size() % 2 == 0) {
        throw InvalidArgument("majority: need an odd number of votes");
    }
    double sum = 0.0;
    for (double v : votes) sum += v;
    return sum > 0.0 ? 1.0 : -1.0;
}

struct OneBitObservation {
    CVector r;  // entries in {+-1 +- j}
    PilotConfig pilot;
    double snr_db = std::numeric_limits<double>::infinity();
    int oversample_count = 1;
};

/// Sentinel for noiseless measurement.
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

/// r = majority over oversample_count copies of sign(Phi h + noise). Noise is
/// CN(0, sigma^2) per component with sigma^2 = (|Phi h|^2 / mn) 10^(-snr/10).
template <std::uniform_random_bit_generator Rng>
OneBitObservation measure_one_bit(const ChannelRealization& ch, const PilotConfig& pilot, double snr_db,
                                  int oversample_count, Rng& rng) {
    if (oversample_count < 1 || oversample_count % 2 == 0) {
        throw InvalidArgument("measure_one_bit: oversample count must be odd and >= 1, got " +
                              std::to_string(oversample_count));
    }
    const auto phi = measurement_operator(pilot, ch.dims);
    const CVector y = phi.apply(ch.h);
    const Eigen::Index len = y.size();

    const bool noiseless = std::isinf(snr_db) && snr_db > 0.0;
    const double signal_power = y.squaredNorm() / static_cast<double>(len);
    const double sigma2 = noiseless ? 0.0 : signal_power * std::pow(10.0, -snr_db / 10.0);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));

    const auto count = static_cast<std::size_t>(oversample_count);
    std::vector<double> re_votes(static_cast<std::size_t>(len) * count);
    std::vector<double> im_votes(re_votes.size());
    for (std::size_t c = 0; c < count; ++c) {
        for (Eigen::Index i = 0; i < len; ++i) {
            Complex noisy = y(i);
            if (!noiseless) {
                const double nr = gauss(rng);
                const double ni = gauss(rng);
                noisy += Complex(nr, ni);
            }
            const Complex q = quantize(noisy);
            re_votes[static_cast<std::size_t>(i) * count + c] = q.real();
            im_votes[static_cast<std::size_t>(i) * count + c] = q.imag();
        }
    }

    OneBitObservation obs{CVector(len), pilot, snr_db, oversample_count};
    for (Eigen::Index i = 0; i < len; ++i) {
        const auto off = static_cast<std::size_t>(i) * count;
        obs.r(i) = Complex(majority(std::span(re_votes).subspan(off, count)),
                           majority(std::span(im_votes).subspan(off, count)));
    }
    return obs;
}

}  // namespace bianm

#endif  // BIANM_CHANNEL_SIM_HPP_
