// Grid-based equilibrium checks. Nothing here knows about g-functions or
// kernels: the payoff is a black box over [0,1]^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

#include <fmt/format.h>

#include "corrgame/equilibrium.hpp"
#include "corrgame/error.hpp"

namespace corrgame {

namespace {

constexpr double kBestResponseTol = 1e-9;

std::size_t grid_intervals(double grid_step, double max_step) {
  if (!(grid_step > 0.0 && grid_step <= max_step)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("grid step {} outside (0, {}]", grid_step, max_step));
  }
  return static_cast<std::size_t>(std::llround(1.0 / grid_step));
}

}  // namespace

Verification verify_equilibrium(const PayoffFn& payoff, Profile at,
                                double grid_step, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::kDomain, "negative tolerance");
  const std::size_t n = grid_intervals(grid_step, 0.1);
  const PayoffPair base = payoff(at.p_a, at.p_b);
  double gain = 0.0;  // deviating to the profile itself gains nothing
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = (k == n) ? 1.0 : static_cast<double>(k) / n;
    gain = std::max(gain, payoff(x, at.p_b).a - base.a);
    gain = std::max(gain, payoff(at.p_a, x).b - base.b);
  }
  return {gain <= tol, gain};
}

// Best responses are computed per grid row/column. A mixed equilibrium sits
// between grid lines, where a player's best-response set jumps; such a
// "switch" between neighbouring opponent strategies is treated as
// indifference at the half-step in between. The search therefore runs on a
// doubled lattice whose odd indices are those half-steps.
std::vector<OracleCluster> best_response_oracle(const PayoffFn& payoff,
                                                double grid_step) {
  const std::size_t n = grid_intervals(grid_step, 0.05) + 1;
  auto coord = [n](std::size_t k) {
    return k + 1 == n ? 1.0 : static_cast<double>(k) / (n - 1);
  };

  std::vector<double> pa(n * n), pb(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = payoff(coord(i), coord(j));
      pa[i * n + j] = v.a;
      pb[i * n + j] = v.b;
    }
  }

  std::vector<std::uint8_t> br_a(n * n, 0), br_b(n * n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    double best = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, pa[i * n + j]);
    for (std::size_t i = 0; i < n; ++i) {
      br_a[i * n + j] = pa[i * n + j] >= best - kBestResponseTol;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double best = -INFINITY;
    for (std::size_t j = 0; j < n; ++j) best = std::max(best, pb[i * n + j]);
    for (std::size_t j = 0; j < n; ++j) {
      br_b[i * n + j] = pb[i * n + j] >= best - kBestResponseTol;
    }
  }

  // switch_a[j]: Alice's best responses to j and j+1 are disjoint.
  std::vector<std::uint8_t> switch_a(n - 1, 1), switch_b(n - 1, 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (br_a[i * n + j] && br_a[i * n + j + 1]) {
        switch_a[j] = 0;
        break;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (br_b[i * n + j] && br_b[(i + 1) * n + j]) {
        switch_b[i] = 0;
        break;
      }
    }
  }

  auto a_row = [&](std::size_t I, std::size_t j) -> bool {
    const std::size_t i = I / 2;
    if (I % 2 == 0) return br_a[i * n + j];
    return br_a[i * n + j] && br_a[(i + 1) * n + j];
  };
  auto a_ok = [&](std::size_t I, std::size_t J) -> bool {
    const std::size_t j = J / 2;
    if (J % 2 == 0) return a_row(I, j);
    return switch_a[j] || (a_row(I, j) && a_row(I, j + 1));
  };
  auto b_col = [&](std::size_t i, std::size_t J) -> bool {
    const std::size_t j = J / 2;
    if (J % 2 == 0) return br_b[i * n + j];
    return br_b[i * n + j] && br_b[i * n + j + 1];
  };
  auto b_ok = [&](std::size_t I, std::size_t J) -> bool {
    const std::size_t i = I / 2;
    if (I % 2 == 0) return b_col(i, J);
    return switch_b[i] || (b_col(i, J) && b_col(i + 1, J));
  };

  const std::size_t m = 2 * n - 1;
  std::vector<std::uint8_t> nash(m * m, 0);
  for (std::size_t I = 0; I < m; ++I) {
    for (std::size_t J = 0; J < m; ++J) {
      nash[I * m + J] = a_ok(I, J) && b_ok(I, J);
    }
  }

  const double half = 0.5 / (n - 1);
  std::vector<OracleCluster> clusters;
  std::vector<std::uint8_t> seen(m * m, 0);
  std::vector<std::pair<double, double>> members;
  for (std::size_t start = 0; start < m * m; ++start) {
    if (!nash[start] || seen[start]) continue;
    members.clear();
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t cell = queue.front();
      queue.pop_front();
      const std::size_t I = cell / m, J = cell % m;
      members.emplace_back(I * half, J * half);
      for (int dI = -1; dI <= 1; ++dI) {
        for (int dJ = -1; dJ <= 1; ++dJ) {
          const auto nI = static_cast<std::ptrdiff_t>(I) + dI;
          const auto nJ = static_cast<std::ptrdiff_t>(J) + dJ;
          if (nI < 0 || nJ < 0 || nI >= static_cast<std::ptrdiff_t>(m) ||
              nJ >= static_cast<std::ptrdiff_t>(m)) {
            continue;
          }
          const std::size_t next = static_cast<std::size_t>(nI) * m + nJ;
          if (nash[next] && !seen[next]) {
            seen[next] = 1;
            queue.push_back(next);
          }
        }
      }
    }
    OracleCluster c;
    for (const auto& [x, y] : members) {
      c.centroid.p_a += x;
      c.centroid.p_b += y;
    }
    c.centroid.p_a /= members.size();
    c.centroid.p_b /= members.size();
    for (const auto& [x, y] : members) {
      c.radius = std::max(
          c.radius, std::hypot(x - c.centroid.p_a, y - c.centroid.p_b));
    }
    c.points = members.size();
    clusters.push_back(c);
  }

  std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    if (a.centroid.p_a != b.centroid.p_a) return a.centroid.p_a < b.centroid.p_a;
    return a.centroid.p_b < b.centroid.p_b;
  });
  return clusters;
}

}  // namespace corrgame
