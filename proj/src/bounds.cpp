#include "partition_lab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "partition_lab/digest.hpp"
#include "partition_lab/errors.hpp"

namespace plab {

namespace {

constexpr double kPi = std::numbers::pi;

// Collects the numbers a bound reads, for the digest.
class Eval {
public:
  Eval(std::string name, const AuditInput& in) : in_(in) { r_.name = std::move(name); }

  const AuditInput& input() const { return in_; }
  const PartitionReport& rep() const { return in_.partition; }
  const GeometryReport& dom() const { return in_.partition.domain; }
  double use(double x) {
    used_.push_back(x);
    return x;
  }

  BoundResult na(std::string why) const { return not_applicable(r_.name, std::move(why)); }
  BoundResult done(double lhs, double rhs, double tol, std::string note = {},
                   BoundResult::Kind kind = BoundResult::Kind::Inequality) {
    r_.lhs = lhs;
    r_.rhs = rhs;
    r_.tolerance = tol;
    r_.kind = kind;
    r_.note = std::move(note);
    Fnv1a f;
    f.text(r_.name).numbers(used_);
    r_.inputs_digest = f.hex();
    return settle(r_);
  }

  // Hypothesis checks; return a reason when unmet.
  std::optional<std::string> need_energy() const {
    if (!rep().has_energy) return "partition energies not computed";
    return std::nullopt;
  }
  std::optional<std::string> need_graph() const {
    if (!rep().has_graph) return "boundary set not available (partition not strong)";
    return std::nullopt;
  }
  std::optional<std::string> need_equipartition() const {
    if (auto e = need_energy()) return e;
    if (auto g = need_graph()) return g;
    if (!rep().equipartition) return "not a spectral equipartition within tolerance";
    return std::nullopt;
  }
  std::optional<std::string> need_nonnegative_chi() const {
    if (dom().euler_char < 0) return "requires chi(Omega) >= 0";
    return std::nullopt;
  }

private:
  const AuditInput& in_;
  BoundResult r_;
  std::vector<double> used_;
};

using Evaluator = std::function<BoundResult(Eval&)>;

#define PLAB_REQUIRE(expr)                 \
  if (auto why_ = (expr)) return e.na(*why_)

const Constants& K = constants();

double h_of(Eval& e) { return e.rep().h; }

// Worst (smallest slack) over per-part checks.
template <class F>
BoundResult worst_part(Eval& e, F&& per_part, const std::string& skip_note) {
  double best_slack = std::numeric_limits<double>::infinity();
  double lhs = 0.0, rhs = 0.0, tol = 0.0;
  bool any = false;
  for (const auto& p : e.rep().parts) {
    double l, r, t;
    if (!per_part(p, l, r, t)) continue;
    // Compare relative to the part's allowance so parts of any size rank fairly.
    const double score = (l - r) / std::max(t, 1e-300);
    if (!any || score < best_slack) {
      best_slack = score;
      lhs = l;
      rhs = r;
      tol = t;
    }
    any = true;
  }
  if (!any) return e.na(skip_note);
  return e.done(lhs, rhs, tol, "worst part");
}

const std::vector<std::pair<std::string, Evaluator>>& table() {
  static const std::vector<std::pair<std::string, Evaluator>> t = {
      {"faber_krahn",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               l = e.use(p.lambda) * e.use(p.area);
               r = K.pi_j_sq;
               tol = energy_tolerance(r, p.lambda, h_of(e));
               return true;
             },
             "no parts");
       }},
      {"fk_partition",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         const double rhs = K.pi_j_sq * e.rep().k / e.use(e.dom().area);
         return e.done(e.use(e.rep().energy), rhs, energy_tolerance(rhs, e.rep().energy, h_of(e)));
       }},
      {"fk_partition_mean",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         const double rhs = K.pi_j_sq * e.rep().k / e.use(e.dom().area);
         return e.done(e.use(e.rep().mean_energy), rhs, energy_tolerance(rhs, e.rep().energy, h_of(e)),
                       "mean energy");
       }},
      {"fk_lk",
       [](Eval& e) {
         const auto& up = e.input().lk_upper;
         if (!up) return e.na("no bracket upper value");
         const double rhs = K.pi_j_sq * e.rep().k / e.use(e.dom().area);
         return e.done(e.use(*up), rhs, energy_tolerance(rhs, *up, h_of(e)), "best energy found for this k");
       }},
      {"bruning_gromes",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         const double A = e.use(e.dom().area), L = std::sqrt(e.use(e.rep().energy));
         const double chi = e.use(e.dom().euler_char), sigma = e.use(e.rep().graph.sigma);
         const double rhs = A * L / (2.0 * K.j) + kPi * K.j / (2.0 * L) * (chi + 0.5 * sigma);
         return e.done(e.use(e.rep().graph.P), rhs, 0.0);
       }},
      {"bg_inner_radius",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         double R = 0.0;
         for (const auto& p : e.rep().parts) R = std::max(R, e.use(p.inner_radius));
         return e.done(K.j / std::sqrt(e.use(e.rep().energy)), R, 0.0, "max inner radius");
       }},
      {"bg_perimeter",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         double ell = std::numeric_limits<double>::infinity();
         for (const auto& p : e.rep().parts) ell = std::min(ell, e.use(p.boundary_length));
         return e.done(ell, 2.0 * kPi * K.j / std::sqrt(e.use(e.rep().energy)), 0.0, "min part boundary");
       }},
      {"bg_fejes_toth",
       [](Eval& e) {
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               const double R = e.use(p.inner_radius);
               l = R * e.use(p.boundary_length) - e.use(p.euler_char) * kPi * R * R;
               r = e.use(p.area);
               tol = 10.0 * h_of(e) * p.boundary_length;
               return true;
             },
             "no parts");
       }},
      {"polya",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               if (p.euler_char != 0 && p.euler_char != 1) return false;
               l = e.use(p.boundary_length);
               r = 2.0 / kPi * e.use(p.area) * std::sqrt(e.use(p.lambda));
               tol = 10.0 * h_of(e) * (1.0 + std::sqrt(p.lambda * p.area));
               return true;
             },
             "no simply or doubly connected part");
       }},
      {"savo_lemma_a",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               const double B = -2.0 * kPi * e.use(p.euler_char);
               l = e.use(p.boundary_length) + e.use(p.inner_radius) * std::max(B, 0.0);
               r = 2.0 / kPi * e.use(p.area) * std::sqrt(e.use(p.lambda));
               tol = 10.0 * h_of(e) * (1.0 + std::sqrt(p.lambda * p.area));
               return true;
             },
             "no parts");
       }},
      {"savo_lemma_b",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               l = kPi;  // psi at alpha = 0
               r = e.use(p.inner_radius) * std::sqrt(e.use(p.lambda));
               tol = 10.0 * h_of(e) * std::sqrt(p.lambda);
               return true;
             },
             "no parts");
       }},
      {"savo_lemma_c",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_energy());
         return worst_part(
             e,
             [&](const PartGeometry& p, double& l, double& r, double& tol) {
               const double B = -2.0 * kPi * e.use(p.euler_char);
               if (!(B < 0.0)) return false;
               l = e.use(p.lambda) * e.use(p.area);
               r = 2.0 * std::abs(B);
               tol = energy_tolerance(r, p.lambda, h_of(e));
               return true;
             },
             "no part with B < 0");
       }},
      {"savo_flat",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         const SavoInputs s = savo_flat_inputs(e.dom());
         if (!(s.B < 0.0)) return e.na("requires B(Omega) < 0");
         const double A = e.use(e.dom().area), L = std::sqrt(e.use(e.rep().energy));
         const double sigma = e.use(e.rep().graph.sigma);
         const double den = 4.0 * kPi + kPi * kPi * s.psi;
         const double rhs = 4.0 * A * L / den - 2.0 * kPi * s.psi * (s.B - kPi * sigma) / (L * den);
         return e.done(e.use(e.rep().graph.P), rhs, 0.0, "flat specialization alpha = 0");
       }},
      {"hales",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_graph());
         double sum = 0.0;
         for (const auto& p : e.rep().parts) sum += std::min(1.0, e.use(p.area));
         const double lhs = e.use(e.rep().graph.P) + 0.5 * e.use(e.dom().boundary_length);
         return e.done(lhs, kTwelveQuarter * sum, 0.0);
       }},
      {"hales_scaled",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_graph());
         double amin = std::numeric_limits<double>::infinity();
         for (const auto& p : e.rep().parts) amin = std::min(amin, e.use(p.area));
         const double lhs = e.use(e.rep().graph.P) + 0.5 * e.use(e.dom().boundary_length);
         return e.done(lhs, kTwelveQuarter * std::sqrt(amin) * e.rep().k, 0.0);
       }},
      {"bga",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         PLAB_REQUIRE(e.need_nonnegative_chi());
         const double rhs = std::sqrt(kPi) / 2.0 * std::sqrt(e.use(e.dom().area) * e.rep().k);
         return e.done(e.use(e.rep().graph.P), rhs, 0.0);
       }},
      {"bga_sharp",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         PLAB_REQUIRE(e.need_nonnegative_chi());
         for (const auto& p : e.rep().parts)
           if (p.euler_char < 0) return e.na("requires chi(D_i) >= 0 for every part");
         const double rhs = K.j / std::sqrt(kPi) * std::sqrt(e.use(e.dom().area) * e.rep().k);
         return e.done(e.use(e.rep().graph.P), rhs, 0.0);
       }},
      {"univ",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         PLAB_REQUIRE(e.need_nonnegative_chi());
         const double c = std::pow(12.0, 0.125) * std::pow(kPi / 4.0, 0.25);
         const double lhs = e.use(e.rep().graph.P) + 0.5 * e.use(e.dom().boundary_length);
         return e.done(lhs, c * std::sqrt(e.use(e.dom().area) * e.rep().k), 0.0);
       }},
      {"asym",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_equipartition());
         const double c = kTwelveQuarter * std::sqrt(K.pi_j_sq / K.lambda_hexa1);
         return e.done(e.use(e.rep().graph.P), c * std::sqrt(e.use(e.dom().area) * e.rep().k), 0.0,
                       "asymptotic statement for minimal equipartitions; finite-k witness");
       }},
      {"polya_conj_length",
       [](Eval& e) {
         const auto& idx = e.input().eigen_index;
         if (!idx) return e.na("not a nodal partition with known eigen index");
         PLAB_REQUIRE(e.need_graph());
         PLAB_REQUIRE(e.need_nonnegative_chi());
         const double rhs = std::sqrt(kPi) / K.j * std::sqrt(e.use(e.dom().area) * e.use(*idx));
         return e.done(e.use(e.rep().graph.P), rhs, 0.0, "conditional on the Polya conjecture");
       }},
      {"euler",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_graph());
         double sum = 0.0;
         for (const auto& p : e.rep().parts) sum += e.use(p.euler_char);
         const double rhs = e.use(e.dom().euler_char) + 0.5 * e.use(e.rep().graph.sigma);
         return e.done(sum, rhs, 0.0, {}, BoundResult::Kind::Equality);
       }},
      {"length_identity",
       [](Eval& e) {
         PLAB_REQUIRE(e.need_graph());
         return e.done(e.use(e.rep().part_boundary_total), 2.0 * e.use(e.rep().graph.P),
                       5.0 * h_of(e) * e.rep().k, {}, BoundResult::Kind::Equality);
       }},
  };
  return t;
}

#undef PLAB_REQUIRE

} // namespace

double length_tolerance(const AuditInput& in) {
  const auto& r = in.partition;
  const double energy_area = r.has_energy ? r.energy * r.domain.area : 0.0;
  return 10.0 * r.h * (1.0 + std::sqrt(std::max(energy_area, K.pi_j_sq * r.k)));
}

double energy_tolerance(double rhs, double lambda, double h) {
  return std::abs(rhs) * 10.0 * h * std::sqrt(std::max(lambda, 0.0));
}

SavoInputs savo_flat_inputs(const GeometryReport& d) {
  SavoInputs s;
  s.alpha = 0.0;
  s.D = d.diameter;
  s.B = -2.0 * kPi * d.euler_char;
  s.C = std::sqrt(kPi * kPi + 0.25 * s.alpha * s.alpha * s.D * s.D);
  s.psi = s.C;
  return s;
}

const std::vector<std::string>& bound_registry() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : table()) v.push_back(name);
    return v;
  }();
  return ids;
}

BoundResult evaluate(const std::string& name, const AuditInput& in) {
  const auto& t = table();
  const auto it = std::find_if(t.begin(), t.end(), [&](const auto& p) { return p.first == name; });
  if (it == t.end()) throw Error(ErrorCode::UnknownBound, "unknown bound id: " + name);
  Eval e(name, in);
  BoundResult r = it->second(e);
  // Length-type comparisons share one allowance.
  if (r.status != BoundStatus::NotApplicable && r.tolerance == 0.0 && r.kind == BoundResult::Kind::Inequality) {
    r.tolerance = length_tolerance(in);
    settle(r);
  }
  return r;
}

std::vector<BoundResult> audit_all(const AuditInput& in) {
  std::vector<BoundResult> out;
  for (const auto& id : bound_registry()) out.push_back(evaluate(id, in));
  return out;
}

AuditInput dilated(const AuditInput& in, double t) {
  AuditInput o = in;
  const double t2 = t * t;
  auto& r = o.partition;
  r.h *= t;
  r.energy /= t2;
  r.mean_energy /= t2;
  r.min_energy /= t2;
  r.part_boundary_total *= t;
  for (auto& p : r.parts) {
    p.lambda /= t2;
    p.area *= t2;
    p.cell_area *= t2;
    p.inner_radius *= t;
    p.boundary_length *= t;
    p.diameter *= t;
  }
  auto& d = r.domain;
  d.area *= t2;
  d.cell_area *= t2;
  d.boundary_length *= t;
  d.inner_radius *= t;
  d.diameter *= t;
  auto& g = r.graph;
  g.P *= t;
  g.boundary_length *= t;
  for (auto& a : g.arcs) {
    a.length *= t;
    for (auto& pt : a.points) pt = t * pt;
  }
  for (auto& s : g.singular_points) s.location = t * s.location;
  if (o.lk_upper) *o.lk_upper /= t2;
  return o;
}

} // namespace plab
