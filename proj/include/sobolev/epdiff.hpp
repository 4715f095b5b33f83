#pragma once

// Eulerian EPDiff flow for a Fourier-multiplier inertia operator A:
//   m_t + grad_u m + (grad u)^t m + (div u) m = 0,   m = A u,
// with m as the prognostic variable, plus the Arnold operator, conserved
// quantities and gradient blow-up detection.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/grid.hpp"
#include "sobolev/operator.hpp"

namespace sobolev {

struct EulerState {
  double t = 0.0;
  SpectralField m;
  SpectralField u;  // A^{-1} m
};

/// State with velocity u (Nyquist modes dropped) and m = A u.
EulerState state_from_velocity(const FourierMultiplier& a, const SpectralField& u, double t = 0.0);
EulerState state_from_momentum(const FourierMultiplier& a, const SpectralField& m, double t = 0.0);

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;               // 0.5 <A u, u>
  std::vector<double> momentum;      // integral of m, per component
  double sup_grad_u = 0.0;           // max over the grid of |du|_F
  std::vector<double> sobolev_norms; // ||u||_{H^q} for the requested q
};

Diagnostics diagnose(const EulerState& state, const std::vector<double>& norm_orders);
double energy(const EulerState& state);

/// N(v, m) = grad_v m + (grad v)^t m + (div v) m, with ((grad v)^t m)_i = sum_j d_i v_j m_j.
/// Evaluated in one pass on the padded grid.
SpectralField epdiff_nonlinearity(const SpectralField& v, const SpectralField& m);

/// ad(v)^T u = A^{-1} N(v, A u).
SpectralField ad_transpose(const FourierMultiplier& a, const SpectralField& v, const SpectralField& u);

/// B(u, v) = (ad(u)^T v + ad(v)^T u) / 2.
SpectralField arnold_B(const FourierMultiplier& a, const SpectralField& u, const SpectralField& v);

/// dm/dt = -N(u, m) with u = A^{-1} m.
SpectralField euler_rhs(const FourierMultiplier& a, const SpectralField& m);

/// du/dt = -B(u, u).
SpectralField velocity_rhs(const FourierMultiplier& a, const SpectralField& u);

/// One classical RK4 step in m.
EulerState step_rk4(const FourierMultiplier& a, const EulerState& state, double dt);

/// Largest dt allowed by the guard dt * sup|u| <= cfl * L / n.
double cfl_limit(const SpectralField& u, double cfl = 0.5);

struct IntegratorOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  /// Diagnostics every `cadence` steps of size dt (and at t = 0).
  int cadence = 1;
  std::vector<double> norm_orders;
  /// Halt when sup|du| exceeds this. Unset: 1e3 * (initial sup|du| + 1).
  std::optional<double> blowup_threshold;
  double cfl = 0.5;
  /// Maximum number of dt halvings before the run is declared blown up.
  int max_halvings = 20;
  /// Keep the state at every diagnostics tick.
  bool keep_snapshots = false;
};

enum class RunStatus { completed, blowup, nan_abort };
const char* to_string(RunStatus status);

struct Trajectory {
  RunStatus status = RunStatus::completed;
  std::vector<Diagnostics> rows;
  std::vector<EulerState> snapshots;
  double threshold = 0.0;
  /// First time sup|du| reached the threshold (linear interpolation between
  /// accepted steps), or the time the step size underflowed.
  std::optional<double> crossing_time;
  bool dt_underflow = false;
  EulerState last_good;
  std::size_t steps = 0;
  std::string message;
};

using TrajectoryObserver = std::function<void(const Diagnostics&, const EulerState&)>;

/// Integrates from `initial` to t_end with RK4. Each step of size dt is split
/// into 2^h substeps when the CFL guard requires it.
Trajectory integrate(const FourierMultiplier& a, const EulerState& initial, const IntegratorOptions& options,
                     const TrajectoryObserver& observer = {});

struct BlowupVerdict {
  bool blowup = false;
  double t_star = 0.0;
  /// Set by the refinement check.
  bool confirmed = false;
  double t_star_refined = 0.0;
  double relative_shift = 0.0;

  /// "none" or "t=<t*>".
  std::string summary() const;
};

/// Verdict of a single trajectory (unconfirmed).
BlowupVerdict detect_blowup(const Trajectory& trajectory);

/// Confirmed when both runs cross the threshold and the crossing times
/// differ by at most `tolerance` relative to the coarse one.
BlowupVerdict detect_blowup(const Trajectory& coarse, const Trajectory& refined, double tolerance = 0.05);

/// Runs the integration at dt and dt/2 and applies the two-run rule.
BlowupVerdict detect_blowup(const FourierMultiplier& a, const EulerState& initial, IntegratorOptions options,
                            double tolerance = 0.05);

}  // namespace sobolev
