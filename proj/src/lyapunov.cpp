#include "qcsmc/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qcsmc/controller.hpp"

namespace qcsmc {

LyapunovParams validate_lyapunov(const LyapunovParams& p) {
    if (!std::isfinite(p.gamma) || !std::isfinite(p.D) || !std::isfinite(p.eta) ||
        !std::isfinite(p.epsilon))
        throw Error(Errc::NonFinite, "Lyapunov parameter not finite");
    if (!(p.gamma > p.D + p.eta))
        throw Error(Errc::GammaTooSmall, "Lyapunov analysis requires gamma > D + eta");
    if (!(p.eta > 0.0)) throw Error(Errc::BadConfig, "eta must be positive");
    const double hi = std::sqrt(2.0 * (p.gamma - p.D - p.eta));
    if (!(p.epsilon > 0.0 && p.epsilon < hi))
        throw Error(Errc::EpsilonOutOfRange,
                    "epsilon must lie in (0, sqrt(2(gamma - D - eta)))");
    return p;
}

std::array<double, 2> xi(const State& x) {
    return {std::sqrt(std::abs(x.x1)) * sgn(x.x1), x.x2};
}

double v_new(const State& x, const LyapunovParams& p) {
    const double coupling = x.x1 * x.x2 < 0.0 ? p.epsilon : 0.0;
    const auto z = xi(x);
    return 0.5 * (2.0 * (p.gamma - p.D - p.eta) * z[0] * z[0] + 2.0 * coupling * z[0] * z[1] +
                  z[1] * z[1]);
}

double v_old(const State& x, double gamma, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0 / 3.0))
        throw Error(Errc::EpsilonOutOfRange, "v_old requires epsilon in (0, 2/3)");
    const auto z = xi(x);
    return 0.5 * (2.0 * gamma * z[0] * z[0] + 2.0 * epsilon * z[0] * z[1] + z[1] * z[1]);
}

double energy(const State& x, double gamma) {
    if (!(gamma > 0.0)) throw Error(Errc::BadConfig, "energy requires gamma > 0");
    return gamma * std::abs(x.x1) + 0.5 * x.x2 * x.x2;
}

double gamma_min_old(double D) {
    if (D < 0.0) throw Error(Errc::BadConfig, "D must be non-negative");
    return std::pow(D, 1.5) + D + 0.5;
}

double gamma_min_new(double D) {
    if (D < 0.0) throw Error(Errc::BadConfig, "D must be non-negative");
    return 2.0 * std::sqrt(2.0) * std::pow(D, 1.5) + D + 0.5;
}

std::optional<std::pair<double, double>> epsilon_interval(double gamma, double D, double eta) {
    if (!(gamma > D + eta) || !(gamma > 0.5 + D))
        throw Error(Errc::PreconditionViolated,
                    "epsilon interval requires gamma > D + eta and gamma > 1/2 + D");
    const double lo = (2.0 / 3.0) * std::pow(2.0 * D + eta, 1.5) / (gamma - 0.5 - D);
    const double hi = std::min(2.0 / 3.0, std::sqrt(2.0 * (gamma - D - eta)));
    if (!(lo < hi)) return std::nullopt;
    return std::pair{lo, hi};
}

double default_eta(double D) { return 1e-3 * std::max(1.0, D); }

double default_epsilon(double gamma, double D, double eta) {
    if (gamma > D + eta && gamma > 0.5 + D) {
        if (auto iv = epsilon_interval(gamma, D, eta)) return 0.5 * (iv->first + iv->second);
    }
    return 0.6;
}

VdotReport vdot_along(const Trajectory& traj, const LyapunovParams& p,
                      std::optional<double> capture_eps1, std::optional<double> capture_eps2) {
    VdotReport rep;
    if (traj.samples.size() < 2) return rep;
    const double dt = traj.samples[1].t - traj.samples[0].t;
    const double eps1 = capture_eps1.value_or(p.gamma * dt * dt);
    const double eps2 = capture_eps2.value_or(p.gamma * dt);

    rep.series.reserve(traj.samples.size() - 1);
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
        const State& a = traj.samples[k].state;
        const State& b = traj.samples[k + 1].state;
        const double va = v_new(a, p);
        const double vb = v_new(b, p);
        rep.series.push_back((vb - va) / dt);

        const bool on_axis = a.x1 == 0.0 || a.x2 == 0.0 || b.x1 == 0.0 || b.x2 == 0.0;
        const bool crossing = sgn(a.x1) != sgn(b.x1) || sgn(a.x2) != sgn(b.x2);
        const bool in_band = (std::abs(a.x1) <= eps1 && std::abs(a.x2) <= eps2) ||
                             (std::abs(b.x1) <= eps1 && std::abs(b.x2) <= eps2);
        const bool post_capture = traj.captured_at && traj.samples[k].t >= *traj.captured_at;
        if (on_axis || crossing || in_band || post_capture) continue;

        const double tol = 1e-9 * std::max(1.0, va);
        if (vb - va > tol) {
            rep.monotone = false;
            rep.max_positive_jump = std::max(rep.max_positive_jump, vb - va - tol);
        }
    }
    return rep;
}

GridMap grid_map(const LyapunovParams& p, double x1_lo, double x1_hi, double x2_lo, double x2_hi,
                 int resolution) {
    if (resolution < 2) throw Error(Errc::BadConfig, "grid resolution must be >= 2");
    if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi))
        throw Error(Errc::BadConfig, "grid ranges must be non-degenerate");
    GridMap map{x1_lo, x1_hi, x2_lo, x2_hi, resolution, {}};
    map.values.resize(static_cast<std::size_t>(resolution) * resolution);

    auto fill_rows = [&](int row_begin, int row_end) {
        for (int i2 = row_begin; i2 < row_end; ++i2) {
            const double x2 = map.x2_at(i2);
            for (int i1 = 0; i1 < resolution; ++i1)
                map.values[static_cast<std::size_t>(i2) * resolution + i1] =
                    v_new({map.x1_at(i1), x2}, p);
        }
    };

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::clamp(std::min(hw, resolution / 16), 1, 16);
    if (workers <= 1) {
        fill_rows(0, resolution);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (resolution + workers - 1) / workers;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(fill_rows, std::min(w * chunk, resolution),
                              std::min((w + 1) * chunk, resolution));
        for (auto& th : pool) th.join();
    }
    return map;
}

}  // namespace qcsmc
