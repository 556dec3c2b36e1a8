#include "gencs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>

#include "gencs/errors.hpp"
#include "gencs/gis.hpp"
#include "gencs/gk.hpp"
#include "gencs/kp.hpp"
#include "gencs/measure.hpp"
#include "gencs/specfun.hpp"

namespace gencs {

namespace {

using cd = std::complex<double>;

std::string fmt_c(cd v) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%g%+gi", v.real(), v.imag());
  return buf;
}

class Collector {
 public:
  explicit Collector(std::string suite) : suite_{std::move(suite)} {}

  // Evaluates `measure`; a thrown library error becomes a failed row.
  void check(const std::string& name, double tolerance, const std::function<double()>& measure) {
    CheckResult row{suite_, name, 0.0, tolerance, false, {}};
    try {
      row.measured = measure();
      row.passed = std::isfinite(row.measured) && row.measured <= tolerance;
    } catch (const Error& e) {
      row.error = std::string(e.name()) + ": " + e.what();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows_.push_back(std::move(row));
  }

  // Expects `action` to throw an Error of type E.
  template <typename E>
  void expect_error(const std::string& name, const std::function<void()>& action) {
    CheckResult row{suite_, name, 0.0, 0.0, false, {}};
    try {
      action();
      row.error = "no error raised";
    } catch (const E&) {
      row.passed = true;
    } catch (const std::exception& e) {
      const auto* err = dynamic_cast<const Error*>(&e);
      row.error = std::string("unexpected error: ") + (err ? std::string(err->name()) + ": " : "") + e.what();
    }
    rows_.push_back(std::move(row));
  }

  std::vector<CheckResult> take() { return std::move(rows_); }

 private:
  std::string suite_;
  std::vector<CheckResult> rows_;
};

std::vector<cd> z_grid() {
  std::vector<cd> out;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) out.emplace_back(-2.5 + 1.25 * i, -2.5 + 1.25 * j);
  return out;
}

std::vector<cd> gis_lambdas(const VerifyOptions& o) {
  if (o.lambda) return {*o.lambda};
  return {2.0, cd{1.0, 1.0}, 0.5, std::polar(1.0, std::numbers::pi / 4.0)};
}

std::vector<cd> gis_zs(const VerifyOptions& o) {
  if (o.z) return {*o.z};
  return {0.5, cd{1.3, 0.2}};
}

std::vector<cd> gk_zs(const VerifyOptions& o) {
  if (o.z) return {*o.z};
  return z_grid();
}

double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  return (a.head(n) - b.head(n)).cwiseAbs().maxCoeff();
}

std::vector<CheckResult> suite_eigenvalue(const VerifyOptions& o) {
  Collector c("eigenvalue");
  for (double alpha : {0.0, 0.37}) {
    const SpectrumModel m = o.model.with_alpha(alpha);
    for (cd z : gk_zs(o)) {
      c.check("A- |z> = z |z>, z=" + fmt_c(z) + " alpha=" + std::to_string(alpha), 1e-10, [&] {
        const GkState s = build_gk(m, z, std::max(120, build_gk(m, z).body.truncation()));
        const TruncatedState lowered = apply_annihilation(s.body);
        return (lowered.coeffs - z * s.body.coeffs.head(lowered.coeffs.size())).norm();
      });
    }
  }
  return c.take();
}

std::vector<CheckResult> suite_action(const VerifyOptions& o) {
  Collector c("action");
  for (double alpha : {0.0, 0.37}) {
    const SpectrumModel m = o.model.with_alpha(alpha);
    for (cd z : gk_zs(o))
      c.check("<H> = |z|^2, z=" + fmt_c(z), 1e-9,
              [&] { return std::abs(mean_energy(build_gk(m, z, 0).body) - std::norm(z)); });
  }
  return c.take();
}

std::vector<CheckResult> suite_temporal(const VerifyOptions& o) {
  Collector c("temporal");
  const cd z = o.z.value_or(cd{1.5, 0.0});
  // 0.37 + t is exact for these t; a rounded sum would shift level n of the
  // rebuilt state by (rounding) * e_n.
  for (double t : {0.5, 0.625}) {
    c.check("GK evolve vs rebuild, t=" + std::to_string(t), 1e-14, [&] {
      const int n = build_gk(o.model, z).body.truncation();
      const GkState s0 = build_gk(o.model.with_alpha(0.37), z, n);
      const GkState s1 = build_gk(o.model.with_alpha(0.37 + t), z, n);
      return max_abs_diff(evolve(s0, t).body.coeffs, s1.body.coeffs);
    });
    if (!o.model.is_harmonic()) {
      c.check("KP evolve vs rebuild, t=" + std::to_string(t), 1e-14, [&] {
        const KpState s0 = build_kp(o.model.with_alpha(0.37), z);
        const KpState s1 = build_kp(o.model.with_alpha(0.37 + t), z, s0.body.truncation());
        return max_abs_diff(evolve(s0, t).body.coeffs, s1.body.coeffs);
      });
    }
  }
  return c.take();
}

std::vector<CheckResult> suite_kp(const VerifyOptions& o) {
  Collector c("kp");
  if (o.model.is_harmonic()) return c.take();
  for (cd z : {cd{1.1, 0.0}, cd{0.4, -1.2}, cd{2.0, 0.0}, cd{-1.2, 1.5}}) {
    c.check("exp form vs disk form, z=" + fmt_c(z), 1e-12, [&] {
      const KpState s = build_kp(o.model, z);
      return max_abs_diff(kp_coeffs_exp_form(o.model, z, s.body.truncation()), s.body.coeffs);
    });
  }
  for (double r : {0.3, 0.8, 1.0}) {
    c.check("c_n series vs closed, n<=15, r=" + std::to_string(r), 1e-10, [&] {
      double worst = 0.0;
      for (int n = 0; n <= 15; ++n)
        worst = std::max(worst, std::abs(cn_series(o.model, n, r) - cn_closed(o.model, n, r)) / cn_closed(o.model, n, r));
      return worst;
    });
  }
  c.check("overlap: coefficient sum vs closed", 1e-12, [&] {
    const KpState a = build_kp_from_zeta(o.model, 0.3);
    const KpState b = build_kp_from_zeta(o.model, cd{0.2, 0.55});
    return std::abs(kp_overlap(a, b) - kp_overlap_closed(a, b));
  });
  return c.take();
}

std::vector<CheckResult> suite_pi(const VerifyOptions& o) {
  Collector c("pi");
  c.check("pi(m,j) - pi(m-1,j) = e_m pi(m+1,j-1), m<=21, j<=6", 1e-12, [&] {
    const PiTable t(o.model, 22, 6);
    double worst = 0.0;
    for (int m = 1; m <= 21; ++m)
      for (int j = 1; j <= 6; ++j) {
        const double lhs = t.value(m, j) - t.value(m - 1, j);
        const double rhs = o.model.energy(m) * t.value(m + 1, j - 1);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
      }
    return worst;
  });
  return c.take();
}

std::vector<CheckResult> suite_saturation(const VerifyOptions& o) {
  Collector c("saturation");
  for (cd lam : gis_lambdas(o)) {
    for (cd z : gis_zs(o)) {
      const std::string tag = " lambda=" + fmt_c(lam) + " z=" + fmt_c(z);
      UncertaintyReport rep;
      std::exception_ptr failure;
      try {
        rep = observables(build_gis(o.model, {lam, z}));
      } catch (const std::exception&) {
        failure = std::current_exception();
      }
      if (failure) {
        c.check("build" + tag, 0.0, [&]() -> double { std::rethrow_exception(failure); });
        continue;
      }
      const double prod = rep.var_w * rep.var_p;
      c.check("saturation" + tag, 1e-8, [&] { return std::abs(rep.saturation_residual) / prod; });
      c.check("var_w = |lambda| Delta" + tag, 1e-8,
              [&] { return std::abs(rep.var_w - std::abs(lam) * rep.delta) / rep.var_w; });
      c.check("var_p = Delta/|lambda|" + tag, 1e-8,
              [&] { return std::abs(rep.var_p - rep.delta / std::abs(lam)) / rep.var_p; });
      c.check("<G> = 2 Re(lambda) var_p" + tag, 1e-8,
              [&] { return std::abs(rep.mean_g - 2.0 * lam.real() * rep.var_p) / std::abs(rep.mean_g); });
      c.check("<F> = 2 Im(lambda) var_p" + tag, 1e-8, [&] {
        return std::abs(rep.mean_f - 2.0 * lam.imag() * rep.var_p) / std::max(std::abs(rep.mean_f), rep.var_p);
      });
      if (std::abs(std::abs(lam) - 1.0) < 1e-15)
        c.check("|lambda|=1: var_w = var_p" + tag, 1e-9, [&] { return std::abs(rep.var_w - rep.var_p); });
    }
  }
  return c.take();
}

std::vector<CheckResult> suite_closed(const VerifyOptions& o) {
  Collector c("closed");
  for (cd lam : gis_lambdas(o)) {
    for (cd z : gis_zs(o)) {
      c.check("closed coefficients vs recurrence n<=12, lambda=" + fmt_c(lam) + " z=" + fmt_c(z), 1e-10, [&] {
        const Eigen::VectorXcd rec = gis_recurrence_coefficients(o.model, {lam, z}, 12);
        double worst = 0.0;
        const double scale = rec.cwiseAbs().maxCoeff();
        for (int n = 0; n <= 12; ++n)
          worst = std::max(worst, std::abs(gis_coeff_closed(o.model, {lam, z}, n) - rec(n)) / scale);
        return worst;
      });
    }
  }
  return c.take();
}

std::vector<CheckResult> suite_degeneracy(const VerifyOptions& o) {
  Collector c("degeneracy");
  const cd z = o.z.value_or(cd{1.3, 0.2});
  c.check("lambda=1 recurrence = GK", 1e-12, [&] {
    const TruncatedState gk = build_gk(o.model, z).body;
    const TruncatedState gis = build_gis_recurrence(o.model, {1.0, z}, {gk.truncation(), false});
    return max_abs_diff(gk.normalized().coeffs, gis.coeffs);
  });
  c.expect_error<LambdaDegenerate>("lambda=-1 rejected", [&] { build_gis(o.model, {-1.0, z}); });
  c.expect_error<NotNormalizable>("Re lambda = 0 flagged", [&] { build_gis(o.model, {cd{0.0, 1.0}, z}); });
  c.expect_error<NotNormalizable>("Re lambda < 0 flagged", [&] { build_gis(o.model, {cd{-0.5, 0.3}, z}); });
  return c.take();
}

std::vector<CheckResult> suite_analytic(const VerifyOptions& o) {
  Collector c("analytic");
  if (o.model.is_harmonic()) return c.take();
  for (cd lam : gis_lambdas(o)) {
    for (cd z : gis_zs(o)) {
      const GisParams p{lam, z};
      const std::string tag = " lambda=" + fmt_c(lam) + " z=" + fmt_c(z);
      c.check("Jacobi expansion vs Taylor n<=12" + tag, 1e-10, [&] {
        const AnalyticSolution s = analytic_kp_solution(o.model, p);
        return max_abs_diff(disk_jacobi_coefficients(s, 12), disk_taylor_coefficients(s, 12));
      });
      c.check("Kummer Taylor vs closed coefficients n<=10" + tag, 1e-10, [&] {
        const Eigen::VectorXcd k = gis_coeffs_from_kummer(o.model, analytic_gk_solution(o.model, p), 10);
        Eigen::VectorXcd closed(11);
        for (int n = 0; n <= 10; ++n) closed(n) = gis_coeff_closed(o.model, p, n);
        return max_abs_diff(k, closed) / closed.cwiseAbs().maxCoeff();
      });
      c.check("disk state vs recurrence state" + tag, 1e-9, [&] {
        const TruncatedState rec = build_gis_recurrence(o.model, p);
        const TruncatedState disk = gis_state_from_disk(o.model, p, rec.truncation());
        return max_abs_diff(rec.coeffs, disk.coeffs);
      });
    }
  }
  c.check("Kummer identity", 1e-11, [&] {
    const cd a{1.5, 0.3}, b{3.0, 0.0}, x{0.7, -0.4};
    return std::abs(hyp1f1(a, b, x) - std::exp(x) * hyp1f1(b - a, b, -x));
  });
  c.check("Laplace bridge lambda=2 z=0.5 s=0.3", 1e-6, [&] { return laplace_bridge_check(o.model, {2.0, 0.5}, 0.3); });
  return c.take();
}

std::vector<CheckResult> suite_moments(const VerifyOptions& o) {
  Collector c("moments");
  if (o.model.is_harmonic()) {
    const MeasureSpec spec{MeasureFamily::GkPlane, o.model};
    for (int n = 1; n <= o.n_max; ++n)
      c.check("moment n=" + std::to_string(n), 1e-12, [&] { return moment_check(spec, n); });
    return c.take();
  }
  const double tol = o.model.family() == Family::InfiniteWell ? 1e-6 : 1e-5;
  const MeasureSpec spec{MeasureFamily::GkPlane, o.model};
  for (int n = 1; n <= o.n_max; ++n)
    c.check("plane moment n=" + std::to_string(n), tol, [&] { return moment_check(spec, n); });
  return c.take();
}

std::vector<CheckResult> suite_identity(const VerifyOptions& o) {
  Collector c("identity");
  if (o.model.is_harmonic()) {
    c.check("plane identity N=10", 1e-8,
            [&] { return identity_residual({MeasureFamily::GkPlane, o.model}, 10); });
    return c.take();
  }
  const MeasureSpec disk{MeasureFamily::KpDisk, o.model};
  c.check("disk identity N=10", 1e-6, [&] { return identity_residual(disk, 10); });
  c.check("kernel reproduction zeta'=0.4", 1e-6,
          [&] { return reproduce_kernel_check(disk, build_kp_from_zeta(o.model, 0.4)); });
  return c.take();
}

using SuiteFn = std::vector<CheckResult> (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"eigenvalue", suite_eigenvalue}, {"action", suite_action},     {"temporal", suite_temporal},
      {"kp", suite_kp},                 {"pi", suite_pi},             {"saturation", suite_saturation},
      {"closed", suite_closed},         {"degeneracy", suite_degeneracy}, {"analytic", suite_analytic},
      {"moments", suite_moments},       {"identity", suite_identity},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    out.push_back("limits");
    return out;
  }();
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
  if (suite == "limits") return limits_report();
  std::vector<CheckResult> out;
  bool found = false;
  for (const auto& [name, fn] : registry()) {
    if (suite == "all" || suite == name) {
      found = true;
      auto rows = fn(options);
      out.insert(out.end(), rows.begin(), rows.end());
    }
  }
  if (suite == "all") {
    auto rows = limits_report();
    out.insert(out.end(), rows.begin(), rows.end());
  }
  if (!found) throw DomainViolation("unknown suite '" + suite + "'");
  return out;
}

std::vector<CheckResult> limits_report(double small_epsilon) {
  Collector c("limits");
  const SpectrumModel well = SpectrumModel::infinite_well();
  const SpectrumModel x4 = SpectrumModel::anharmonic(2.0 / 3.0);
  c.check("eps=2/3 energies vs well, n<=200", 0.0, [&] {
    double worst = 0.0;
    for (int n = 0; n <= 200; ++n) worst = std::max(worst, std::abs(x4.energy(n) - well.energy(n)));
    return worst;
  });
  c.check("eps=2/3 GK coefficients vs well, z=1", 1e-12,
          [&] { return max_abs_diff(build_gk(x4, 1.0).body.coeffs, build_gk(well, 1.0).body.coeffs); });
  c.check("eps=2/3 KP coefficients vs well, z=1.1", 1e-12,
          [&] { return max_abs_diff(build_kp(x4, 1.1).body.coeffs, build_kp(well, 1.1).body.coeffs); });

  const SpectrumModel small = SpectrumModel::anharmonic(small_epsilon);
  const SpectrumModel harm = SpectrumModel::harmonic();
  c.check("eps->0 GK coefficients vs harmonic, n<=10, |z|<=2", 1e-4, [&] {
    double worst = 0.0;
    for (cd z : {cd{2.0, 0.0}, cd{1.0, 1.0}, cd{-0.5, 1.5}}) {
      const Eigen::VectorXcd a = gk_coefficients(small, z, 10);
      const Eigen::VectorXcd b = gk_coefficients(harm, z, 10);
      worst = std::max(worst, max_abs_diff(a, b));
    }
    return worst;
  });
  c.check("eps->0 GIS plane function vs Gaussian, |x|<=1", 1e-3, [&] {
    double worst = 0.0;
    for (const GisParams p : {GisParams{2.0, 0.5}, GisParams{cd{1.0, 1.0}, cd{1.3, 0.2}}})
      for (cd x : {cd{1.0, 0.0}, cd{-1.0, 0.0}, cd{0.0, 1.0}, cd{0.5, -0.5}, cd{-0.3, 0.7}}) {
        const cd g = harmonic_gis_gaussian(p, x);
        worst = std::max(worst, std::abs(gis_plane_function(small, p, x) - g) / std::abs(g));
      }
    return worst;
  });
  return c.take();
}

}  // namespace gencs
