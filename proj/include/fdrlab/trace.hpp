#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdrlab/problem.hpp"

namespace fdrlab {

enum class ProxTarget { F, G };

/// One oracle call: query point, which function, stepsize, output and the
/// residual d = z - y. These are exactly the quantities the span-condition
/// checker consumes.
struct ProxCall {
  ProxTarget target;
  double gamma;
  Vec z;
  Vec y;
  Vec d;
};

/// Full record of a run: all named iterates the method defines, derived
/// subgradients, squared distances to x_star when known, and the oracle log.
struct RunTrace {
  std::string algorithm;
  std::map<std::string, std::string> metadata;

  std::vector<Vec> x;  // primal iterates
  std::vector<Vec> w;  // FDR shadow sequence
  std::vector<Vec> y;  // secondary prox outputs
  std::vector<Vec> z;  // over-relaxed / fixed-point iterates
  std::vector<Vec> u;  // dual iterates

  std::vector<Vec> f_subgrad;  // prox residuals (z - y)/gamma at f-calls
  std::vector<Vec> g_subgrad;  // prox residuals at g-calls

  std::vector<double> sq_dist;     // ||x_k - x_star||^2 per recorded iterate
  std::vector<double> objective;   // f + g values (FISTA)
  std::vector<double> residual;    // fixed-point residuals (OHM/DRS/PRS)
  std::vector<ProxCall> calls;

  const Vec& final_x() const {
    if (x.empty()) throw std::runtime_error("RunTrace: no iterates recorded");
    return x.back();
  }
};

/// Routes prox evaluations through the trace's call log, enforcing an
/// optional call budget and policing non-finite outputs.
class OracleSession {
 public:
  OracleSession(const CompositeProblem& p, RunTrace& trace,
                std::optional<std::size_t> budget = std::nullopt)
      : p_(p), trace_(trace), budget_(budget) {}

  Vec prox_f(const Vec& z, double gamma) {
    return call(ProxTarget::F, z, gamma);
  }
  Vec prox_g(const Vec& z, double gamma) {
    return call(ProxTarget::G, z, gamma);
  }

  std::size_t call_count() const { return trace_.calls.size(); }

 private:
  Vec call(ProxTarget target, const Vec& z, double gamma) {
    if (budget_ && trace_.calls.size() >= *budget_) {
      throw std::runtime_error("prox-call budget exceeded");
    }
    if (gamma <= 0) throw std::invalid_argument("prox stepsize must be > 0");
    require_finite(z, "prox query");
    Vec y = (target == ProxTarget::F) ? p_.f.prox(z, gamma)
                                      : p_.g.prox(z, gamma);
    require_finite(y, "prox output");
    trace_.calls.push_back({target, gamma, z, y, Vec(z - y)});
    return y;
  }

  const CompositeProblem& p_;
  RunTrace& trace_;
  std::optional<std::size_t> budget_;
};

inline void record_distance(RunTrace& trace, const CompositeProblem& p,
                            const Vec& xk) {
  if (p.solution) {
    trace.sq_dist.push_back((xk - p.solution->x_star).squaredNorm());
  }
}

}  // namespace fdrlab
