#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace maghull {

enum class QuadratureKind { GaussLaguerre, LogTrapezoid };

std::string_view to_string(QuadratureKind kind);

/// Rule for integrals of the form  int_0^inf e^{-t} f(t) dt  ~  sum_k weights[k] f(nodes[k]).
/// The exponential weight is absorbed into `weights`.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::GaussLaguerre;
  /// Range of the log-trapezoid rule; unused for Gauss-Laguerre.
  double lower = 0.0;
  double upper = 0.0;

  std::size_t order() const noexcept { return nodes.size(); }

  /// Newton iteration on the Laguerre three-term recurrence in extended
  /// precision.
  static QuadratureRule gauss_laguerre(std::size_t order);

  /// Trapezoid rule in log t on [lower, upper] with `order` log-spaced nodes.
  /// The mass of [0, lower] is attached to the first node; the tail beyond
  /// `upper` is dropped (bounded by e^{-upper} sup|f|).
  static QuadratureRule log_trapezoid(std::size_t order, double lower = 1e-6, double upper = 50.0);

  /// Same kind and range at twice the order.
  QuadratureRule doubled() const;
};

inline constexpr std::size_t kDefaultQuadratureOrder = 64;

}  // namespace maghull
