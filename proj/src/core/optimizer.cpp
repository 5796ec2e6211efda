// Copyright 2026 The msgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/optimizer.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "core/error.hpp"

namespace msgate {

int default_reference_mode(int n_modes) {
    require(n_modes >= 1, "empty spectrum");
    return std::max(0, n_modes / 2 - 1);
}

std::vector<int> default_target_modes(int n_modes) {
    const int ref = default_reference_mode(n_modes);
    std::vector<int> out;
    for (int k = ref - 5; k <= ref + 4; ++k) {
        if (k >= 0 && k < n_modes) out.push_back(k);
    }
    return out;
}

void OptimizationProblem::validate(const ModeData &modes) const {
    base_schedule.validate();
    require(!target_modes.empty(), "target_modes must not be empty");
    for (int k : target_modes) {
        if (k < 0 || k >= modes.size()) fail(ErrorCode::OutOfRange, "target mode index out of range");
    }
    const auto [i, j] = ion_pair;
    if (i < 0 || j < 0 || i >= modes.size() || j >= modes.size()) {
        fail(ErrorCode::OutOfRange, "ion pair index out of range");
    }
    require(i != j, "ion pair must name two distinct ions");
    require(max_evals > 0, "max_evals must be positive");
    require(starts >= 1, "starts must be >= 1");
    require(reference_amplitude > 0.0, "reference amplitude must be positive");
    require(initial_step > 0.0 && min_step > 0.0 && min_step <= initial_step, "invalid step sizes");
}

namespace {

// Evaluates the cost for many fm patterns on one schedule. The envelope and
// the per-mode rotations e^{i (mu_ref - w_k) t} are cached; each call only
// recomputes Phi(t) from the turning points.
class CostEvaluator {
public:
    CostEvaluator(const OptimizationProblem &problem, const ModeData &modes) : problem_(problem) {
        PulseSchedule sched = problem.base_schedule;
        sched.amp_scale = problem.reference_amplitude;
        drive_ = sample_drive(sched, problem.intervals);
        const int g = drive_.intervals();
        const double h = drive_.step;
        const double tau = drive_.gate_time;
        // Time average of the running integral:
        // (1/tau) int_0^tau A dt = (1/tau) int_0^tau (tau - t) Omega e^{i theta} dt.
        weighted_.resize(static_cast<std::size_t>(g) + 1);
        for (int i = 0; i <= g; ++i) {
            const double w = (i == 0 || i == g) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            weighted_[i] = w * h / 3.0 * drive_.amplitude[i] * (tau - drive_.time(i)) / tau;
        }
        const auto [ion_i, ion_j] = problem.ion_pair;
        for (int k : problem.target_modes) {
            const double detune = drive_.mu_ref - modes.frequencies(k);
            std::vector<Complex> rot(weighted_.size());
            for (int i = 0; i <= g; ++i) rot[i] = std::polar(1.0, detune * drive_.time(i));
            rotations_.push_back(std::move(rot));
            const double ei = modes.eta(ion_i, k), ej = modes.eta(ion_j, k);
            weights_.push_back(ei * ei + ej * ej);
        }
        phase_.resize(weighted_.size());
    }

    double operator()(const std::vector<double> &fm_points) {
        for (double p : fm_points) {
            if (!std::isfinite(p) || std::abs(p) > kMaxFmOffset) return std::numeric_limits<double>::infinity();
        }
        PulseSchedule sched = problem_.base_schedule;
        sched.fm_points = fm_points;
        const std::vector<double> phi = sample_fm_phase(sched, problem_.intervals);
        for (std::size_t i = 0; i < phase_.size(); ++i) phase_[i] = weighted_[i] * std::polar(1.0, phi[i]);
        double total = 0.0;
        for (std::size_t m = 0; m < rotations_.size(); ++m) {
            Complex mean{};
            const auto &rot = rotations_[m];
            for (std::size_t i = 0; i < phase_.size(); ++i) mean += phase_[i] * rot[i];
            total += weights_[m] * std::norm(mean);
        }
        return total;
    }

private:
    const OptimizationProblem &problem_;
    SampledDrive drive_;
    std::vector<double> weighted_;
    std::vector<std::vector<Complex>> rotations_;
    std::vector<double> weights_;
    std::vector<Complex> phase_;
};

class BudgetedSearch {
public:
    BudgetedSearch(CostEvaluator &f, long max_evals, std::vector<TracePoint> &trace)
        : f_(f), max_evals_(max_evals), trace_(trace) {}

    double eval(const std::vector<double> &x) {
        if (evals_ >= max_evals_) {
            std::ostringstream msg;
            msg << "optimizer budget of " << max_evals_ << " evaluations exhausted (best cost "
                << best_ << ")";
            fail(ErrorCode::BudgetExhausted, msg.str());
        }
        const double c = f_(x);
        ++evals_;
        trace_.push_back({evals_, c});
        best_ = std::min(best_, c);
        return c;
    }

    long evaluations() const { return evals_; }

private:
    CostEvaluator &f_;
    long max_evals_;
    long evals_ = 0;
    double best_ = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> &trace_;
};

double explore(BudgetedSearch &search, std::vector<double> &x, double fx, double step) {
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double keep = x[d];
        x[d] = keep + step;
        double c = search.eval(x);
        if (c < fx) {
            fx = c;
            continue;
        }
        x[d] = keep - step;
        c = search.eval(x);
        if (c < fx) {
            fx = c;
            continue;
        }
        x[d] = keep;
    }
    return fx;
}

struct LocalResult {
    std::vector<double> x;
    double cost;
};

LocalResult hooke_jeeves(BudgetedSearch &search, std::vector<double> x, const OptimizationProblem &p) {
    double fx = search.eval(x);
    double step = p.initial_step;
    for (;;) {
        const double cycle_start = fx;
        std::vector<double> y = x;
        double fy = explore(search, y, fx, step);
        if (fy < fx) {
            while (fy < fx) {
                std::vector<double> pattern(x.size());
                for (std::size_t d = 0; d < x.size(); ++d) pattern[d] = 2.0 * y[d] - x[d];
                x = std::move(y);
                fx = fy;
                y = pattern;
                fy = explore(search, y, search.eval(y), step);
            }
            if (cycle_start - fx <= p.relative_tolerance * std::abs(cycle_start)) break;
        } else {
            step *= 0.5;
            if (step < p.min_step) break;
        }
    }
    return {std::move(x), fx};
}

// 53 random mantissa bits in [0, 1); fixed across platforms, unlike the
// standard distributions.
double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double cost(const OptimizationProblem &problem, const ModeData &modes,
            const std::vector<double> &fm_points) {
    problem.validate(modes);
    require(fm_points.size() == problem.base_schedule.fm_points.size(),
            "fm_points length must match the schedule's free turning points");
    CostEvaluator f(problem, modes);
    return f(fm_points);
}

OptimizationResult optimize(const OptimizationProblem &problem, const ModeData &modes) {
    problem.validate(modes);
    CostEvaluator f(problem, modes);
    OptimizationResult out;
    BudgetedSearch search(f, problem.max_evals, out.trace);

    std::mt19937_64 rng(problem.seed);
    const std::vector<double> &base = problem.base_schedule.fm_points;
    LocalResult best{base, std::numeric_limits<double>::infinity()};
    for (int s = 0; s < problem.starts; ++s) {
        std::vector<double> start = base;
        if (s > 0) {
            for (double &v : start) {
                v += 2.0 * problem.initial_step * (2.0 * unit_uniform(rng) - 1.0);
                v = std::clamp(v, -kMaxFmOffset, kMaxFmOffset);
            }
        }
        const std::size_t first_eval = out.trace.size();
        LocalResult local = hooke_jeeves(search, start, problem);
        if (s == 0) out.initial_cost = out.trace[first_eval].cost;
        if (local.cost < best.cost) {
            best = std::move(local);
            out.best_start = s;
        }
    }

    out.schedule = problem.base_schedule;
    out.schedule.amp_scale = problem.reference_amplitude;
    out.schedule.fm_points = best.x;
    out.final_cost = best.cost;
    out.evaluations = search.evaluations();
    return out;
}

double calibrate_power(const std::vector<ModeResponse> &responses, double reference,
                       const ModeData &modes, int ion_i, int ion_j) {
    const double beta = entangling_angle(responses, modes, ion_i, ion_j);
    if (!(std::abs(beta) >= 1e-12)) {
        std::ostringstream msg;
        msg << "ions " << ion_i << " and " << ion_j << " are effectively uncoupled (|beta_ref| = "
            << std::abs(beta) << " rad); try another reference frequency";
        fail(ErrorCode::DegeneratePair, msg.str());
    }
    return reference * std::sqrt((kPi / 4.0) / std::abs(beta));
}

double calibrate_power(const PulseSchedule &sched, const ModeData &modes, int ion_i, int ion_j,
                       int intervals, unsigned threads) {
    PulseSchedule ref = sched;
    if (!(ref.amp_scale > 0.0)) ref.amp_scale = kDefaultReferenceRabi;
    const auto responses = mode_responses(sample_drive(ref, intervals), modes, threads);
    return calibrate_power(responses, ref.amp_scale, modes, ion_i, ion_j);
}

}  // namespace msgate
