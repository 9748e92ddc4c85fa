#include "qcsmc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "qcsmc/analytic.hpp"
#include "qcsmc/controller.hpp"
#include "qcsmc/lyapunov.hpp"

namespace qcsmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool region_accepts(SampleRegion want, const State& x, double gamma) {
    const Region r = classify(x, gamma);
    switch (want) {
        case SampleRegion::U: return r.domain == Domain::U && r.quadrant != Quadrant::Origin;
        case SampleRegion::Ca: return r.domain == Domain::C && r.in_ca;
        case SampleRegion::C: return r.domain == Domain::C;
        case SampleRegion::Any: return true;
    }
    return false;
}

DisturbanceSpec realize_disturbance(const DisturbanceSpec& family, std::uint64_t seed,
                                    std::uint64_t run_index) {
    DisturbanceSpec spec = family;
    if (auto* sin = std::get_if<SinusoidDisturbance>(&spec)) {
        sin->phase_rad =
            uniform_draw(seed, run_index * 4 + 2, 0.0, 2.0 * std::numbers::pi);
    } else if (auto* ur = std::get_if<UniformRandomDisturbance>(&spec)) {
        ur->seed = splitmix64(seed ^ splitmix64(run_index * 4 + 3));
    }
    return spec;
}

SweepRunResult run_one(const SweepSpec& spec, int index) {
    SweepRunResult res;
    res.index = index;
    const auto run_index = static_cast<std::uint64_t>(index);
    res.x0 = sample_x0(spec, run_index);

    SimConfig cfg = spec.base;
    cfg.x0 = res.x0;
    cfg.disturbance = realize_disturbance(spec.disturbance_family, spec.seed, run_index);
    cfg = validate_config(cfg);

    const Trajectory traj = simulate(cfg, ControlLaw::Modified);
    res.capture_time = traj.captured_at;
    res.diverged = traj.first_event(EventKind::Diverged).has_value();

    const bool starts_in_u = res.x0.x1 * res.x0.x2 >= 0.0 &&
                             !(res.x0.x1 == 0.0 && res.x0.x2 == 0.0);
    if (starts_in_u) {
        const auto [lo, hi] = reach_time_U_bounds(res.x0, cfg.params);
        res.bracket_lo = lo;
        res.bracket_hi = hi;
        res.u_exit_time = traj.first_event(EventKind::EnterC);
        // one-step slack on each side for the discrete-time crossing
        if (res.u_exit_time)
            res.in_bracket = *res.u_exit_time >= lo - *cfg.dt && *res.u_exit_time <= hi + *cfg.dt;
        else
            res.in_bracket = res.capture_time.has_value();  // captured without a C phase
    }

    try {
        res.overshoot = overshoot_check(traj, *cfg.capture_eps1).overshoot;
    } catch (const Error& e) {
        if (e.code() != Errc::NoCPhase) throw;
    }

    for (const auto& s : traj.samples) {
        if (traj.captured_at && s.t >= *traj.captured_at) break;
        if (s.region.domain == Domain::U && s.state.x1 != 0.0)
            res.max_abs_u_in_U = std::max(res.max_abs_u_in_U, std::abs(s.u));
    }

    LyapunovParams lp;
    lp.gamma = cfg.params.gamma;
    lp.D = cfg.params.D;
    lp.eta = cfg.params.eta.value_or(default_eta(lp.D));
    lp.epsilon = cfg.params.epsilon.value_or(default_epsilon(lp.gamma, lp.D, lp.eta));
    res.vdot_monotone = vdot_along(traj, lp, cfg.capture_eps1, cfg.capture_eps2).monotone;
    return res;
}

}  // namespace

double uniform_draw(std::uint64_t seed, std::uint64_t stream, double lo, double hi) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(stream));
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + u * (hi - lo);
}

State sample_x0(const SweepSpec& spec, std::uint64_t run_index) {
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        // streams are disjoint across (run, attempt, coordinate)
        const std::uint64_t base = (run_index << 20) | (attempt << 2);
        State x{uniform_draw(spec.seed, base, spec.x1_lo, spec.x1_hi),
                uniform_draw(spec.seed, base + 1, spec.x2_lo, spec.x2_hi)};
        if (region_accepts(spec.x0_region, x, spec.base.params.gamma)) return x;
    }
    throw Error(Errc::BadConfig, "rejection sampling failed: region does not meet the x0 box");
}

SweepSummary run_sweep(const SweepSpec& spec, int threads) {
    if (spec.samples < 1) throw Error(Errc::BadConfig, "sweep needs at least one sample");
    validate_config(spec.base);  // surface base-config errors before spawning work

    SweepSummary summary;
    summary.runs.resize(static_cast<std::size_t>(spec.samples));

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::min(spec.samples, 16));

    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&](int w) {
        for (int i = w; i < spec.samples; i += workers) {
            try {
                summary.runs[static_cast<std::size_t>(i)] = run_one(spec, i);
            } catch (...) {
                std::scoped_lock lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (const auto& r : summary.runs) {
        if (r.capture_time) ++summary.captured;
        if (!r.in_bracket) ++summary.bracket_violations;
        if (r.overshoot && *r.overshoot) ++summary.overshoots;
        if (!r.vdot_monotone) ++summary.vdot_violations;
        if (r.diverged) ++summary.diverged;
    }
    return summary;
}

}  // namespace qcsmc
