#include "qcosym/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace qcosym {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// 5th minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kMinGrowth = 0.2;
constexpr double kMaxGrowth = 5.0;
constexpr double kBeta = 0.04;  // PI stabilisation
constexpr double kExpo1 = 0.2 - kBeta * 0.75;

class Stepper {
 public:
  Stepper(const OdeProblem& prob, const IntegratorConfig& cfg)
      : prob_(prob), cfg_(cfg), n_(prob.y0.size()) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &y1_, &r1_, &r2_, &r3_,
                    &r4_, &r5_})
      v->assign(n_, 0.0);
  }

  Trajectory run(std::span<const double> outs) {
    Trajectory tr;
    double t = prob_.t0;
    std::vector<double> y = prob_.y0;
    eval(t, y, k1_);

    std::size_t next_out = 0;
    const bool every_step = outs.empty();
    auto record = [&](double tt, const std::vector<double>& yy) {
      tr.times.push_back(tt);
      tr.states.push_back(yy);
    };
    if (every_step) {
      record(t, y);
    } else {
      while (next_out < outs.size() && outs[next_out] <= t) record(outs[next_out++], y);
    }

    double h = cfg_.initial_step ? *cfg_.initial_step : initial_step(t, y);
    const double hmax = cfg_.max_step ? *cfg_.max_step : std::abs(prob_.t1 - prob_.t0);
    h = std::min(h, hmax);
    double facold = 1e-4;
    bool last_rejected = false;

    while (t < prob_.t1) {
      if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
        throw IntegratorError(IntegratorError::Kind::max_steps, t,
                              "maximum number of steps exceeded at t = " + std::to_string(t));
      const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h < hmin)
        throw IntegratorError(IntegratorError::Kind::step_underflow, t,
                              "step size underflow at t = " + std::to_string(t) +
                                  " (problem may be stiff)");
      bool final_step = false;
      if (t + h >= prob_.t1 || t + 1.01 * h >= prob_.t1) {
        h = prob_.t1 - t;
        final_step = true;
      }

      const double err = attempt(t, h, y);
      const double fac11 = std::pow(err, kExpo1);
      if (err <= 1.0) {
        ++stats_.accepted;
        double growth = kSafety / (fac11 / std::pow(facold, kBeta));
        growth = std::clamp(growth, kMinGrowth, kMaxGrowth);
        if (last_rejected) growth = std::min(growth, 1.0);
        facold = std::max(err, 1e-4);

        prepare_dense(h, y);
        const double t_new = final_step ? prob_.t1 : t + h;
        if (every_step) {
          record(t_new, y1_);
        } else {
          while (next_out < outs.size() && outs[next_out] <= t_new) {
            const double th = (outs[next_out] - t) / h;
            record(outs[next_out++], dense(th));
          }
        }
        t = t_new;
        y.swap(y1_);
        k1_.swap(k7_);  // FSAL
        h *= growth;
        h = std::min(h, hmax);
        last_rejected = false;
      } else {
        ++stats_.rejected;
        h *= std::max(kMinGrowth, kSafety / fac11);
        last_rejected = true;
      }
    }
    // Output times at the very end that rounding pushed past t1.
    while (!every_step && next_out < outs.size()) record(outs[next_out++], y);
    tr.stats = stats_;
    return tr;
  }

 private:
  void eval(double t, const std::vector<double>& y, std::vector<double>& out) {
    ++stats_.rhs_evals;
    prob_.rhs(t, y, out);
    for (double v : out)
      if (!std::isfinite(v))
        throw IntegratorError(IntegratorError::Kind::non_finite, t,
                              "non-finite right-hand side at t = " + std::to_string(t));
  }

  double scale(double a, double b) const {
    return cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(a), std::abs(b));
  }

  double initial_step(double t, const std::vector<double>& y) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = scale(y[i], y[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, std::abs(prob_.t1 - prob_.t0));
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * k1_[i];
    eval(t + h, ytmp_, k2_);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = scale(y[i], y[i]);
      der2 += ((k2_[i] - k1_[i]) / sk) * ((k2_[i] - k1_[i]) / sk);
    }
    der2 = std::sqrt(der2 / static_cast<double>(n_)) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf / static_cast<double>(n_)));
    const double h1 =
        der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, std::abs(prob_.t1 - prob_.t0)});
  }

  // One trial step from (t, y) with k1 = f(t, y). Fills k2..k7, y1; returns
  // the max-norm scaled error estimate.
  double attempt(double t, double h, const std::vector<double>& y) {
    auto stage = [&](double c, auto&& combine, std::vector<double>& k) {
      for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * combine(i);
      eval(t + c * h, ytmp_, k);
    };
    stage(c2, [&](std::size_t i) { return a21 * k1_[i]; }, k2_);
    stage(c3, [&](std::size_t i) { return a31 * k1_[i] + a32 * k2_[i]; }, k3_);
    stage(c4, [&](std::size_t i) { return a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]; }, k4_);
    stage(c5,
          [&](std::size_t i) {
            return a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i];
          },
          k5_);
    stage(1.0,
          [&](std::size_t i) {
            return a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i];
          },
          k6_);
    for (std::size_t i = 0; i < n_; ++i)
      y1_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                           a76 * k6_[i]);
    eval(t + h, y1_, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                            e6 * k6_[i] + e7 * k7_[i]);
      err = std::max(err, std::abs(e) / scale(y[i], y1_[i]));
    }
    if (!std::isfinite(err))
      throw IntegratorError(IntegratorError::Kind::non_finite, t,
                            "non-finite error estimate at t = " + std::to_string(t));
    return err;
  }

  void prepare_dense(double h, const std::vector<double>& y) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = y1_[i] - y[i];
      const double bspl = h * k1_[i] - ydiff;
      r1_[i] = y[i];
      r2_[i] = ydiff;
      r3_[i] = bspl;
      r4_[i] = ydiff - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                    d7 * k7_[i]);
    }
  }

  std::vector<double> dense(double theta) const {
    const double s1 = 1.0 - theta;
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = r1_[i] + theta * (r2_[i] + s1 * (r3_[i] + theta * (r4_[i] + s1 * r5_[i])));
    return out;
  }

  const OdeProblem& prob_;
  const IntegratorConfig& cfg_;
  std::size_t n_;
  IntegratorStats stats_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, y1_;
  std::vector<double> r1_, r2_, r3_, r4_, r5_;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw PreconditionError("integrator tolerances must be positive");
  if (max_steps == 0) throw PreconditionError("max_steps must be positive");
  if (initial_step && !(*initial_step > 0.0))
    throw PreconditionError("initial_step must be positive");
  if (max_step && !(*max_step > 0.0)) throw PreconditionError("max_step must be positive");
}

Trajectory integrate_dp45(const OdeProblem& prob, const IntegratorConfig& cfg,
                          std::span<const double> output_times) {
  cfg.validate();
  if (!prob.rhs) throw PreconditionError("integrate_dp45: missing right-hand side");
  if (!(prob.t1 > prob.t0)) throw PreconditionError("integrate_dp45: t1 must exceed t0");
  if (prob.y0.empty()) throw DimensionError("integrate_dp45: empty initial state");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < prob.t0 || output_times[i] > prob.t1)
      throw PreconditionError("integrate_dp45: output time outside [t0, t1]");
    if (i > 0 && output_times[i] < output_times[i - 1])
      throw PreconditionError("integrate_dp45: output times must be sorted");
  }
  Stepper s(prob, cfg);
  return s.run(output_times);
}

Trajectory integrate_field(const VectorFieldFn& vf, const std::vector<double>& y0, double t0,
                           double t1, const IntegratorConfig& cfg,
                           std::span<const double> output_times) {
  if (y0.size() != vf.dim()) throw DimensionError("integrate_field: y0 dimension mismatch");
  OdeProblem prob;
  prob.y0 = y0;
  prob.t0 = t0;
  prob.t1 = t1;
  prob.rhs = [&vf](double, std::span<const double> y, std::span<double> dy) {
    const auto v = vf.eval<double>(y);
    std::copy(v.begin(), v.end(), dy.begin());
  };
  return integrate_dp45(prob, cfg, output_times);
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {t0};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = t1;
  return out;
}

}  // namespace qcosym
