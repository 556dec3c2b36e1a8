#ifndef GENCS_QUADRATURE_HPP
#define GENCS_QUADRATURE_HPP

#include <Eigen/Core>

#include <optional>
#include <type_traits>

namespace gencs {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule. Nodes come from the Golub-Welsch eigenproblem
/// and are polished by Newton steps on the Legendre recurrence. Rules are
/// cached; the cache is guarded, so concurrent callers are safe.
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] split into `panels` equal panels. f may return a
/// scalar or a dynamic Eigen vector.
template <typename F>
auto integrate_panels(const GaussRule& rule, double a, double b, int panels, F&& f) {
  using Value = std::decay_t<decltype(f(a))>;
  std::optional<Value> sum;
  const double width = (b - a) / panels;
  const double half = 0.5 * width;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + p * width + half;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      Value term = f(mid + half * rule.nodes(i));
      term *= half * rule.weights(i);
      if (sum) {
        *sum += term;
      } else {
        sum = std::move(term);
      }
    }
  }
  return *sum;
}

}  // namespace gencs

#endif  // GENCS_QUADRATURE_HPP
