#include "freeconv/build.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "freeconv/quadrature.hpp"

namespace freeconv {

namespace {

// Ladder evaluation of -(1/pi) Im G(x+iy) with atom tails removed.
double density_ladder(const RExpr& e, double x, const std::vector<Atom>& atoms,
                      const InversionConfig& cfg, double scale) {
  scale = std::max(scale, cfg.ladder_floor / cfg.ladder.back());
  std::vector<double> ys, vs;
  std::optional<Complex> seed;
  for (double y0 : cfg.ladder) {
    double y = scale * y0;
    Complex w = invert_k(e, Complex{x, y}, cfg, seed);
    seed = w;
    double v = -w.imag() / kPi;
    for (const auto& a : atoms) {
      double dx = x - a.x;
      v -= a.mass * (y / kPi) / (dx * dx + y * y);
    }
    ys.push_back(y);
    vs.push_back(v);
  }
  size_t use = std::min(ys.size(), static_cast<size_t>(cfg.extrapolation_order) + 1);
  std::span<const double> yt(ys.data() + (ys.size() - use), use);
  std::span<const double> vt(vs.data() + (vs.size() - use), use);
  return extrapolate_to_zero(yt, vt);
}

double dist_to(const std::vector<double>& refs, double x) {
  double d = std::numeric_limits<double>::infinity();
  for (double r : refs) d = std::min(d, std::abs(x - r));
  return d;
}

// Real zeros of K' between consecutive poles of K (and on the outer tails),
// found by sign changes on end-clustered grids plus bisection. The images
// K(w*) of these critical points are the square-root edges of the support;
// the tail limit K(+-inf) = total translate supplies the remaining
// (singular-edge / atom-side) boundary value.
std::vector<double> candidate_edges(const RExpr& e) {
  std::vector<double> poles = e.poles();
  poles.push_back(0.0);  // pole of 1/w
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end()), poles.end());

  auto kp = [&](double w) { return eval_k_prime(e, Complex{w, 0.0}).real(); };
  auto kv = [&](double w) { return eval_k(e, Complex{w, 0.0}).real(); };

  const double W = 1e4;
  std::vector<std::pair<double, double>> intervals;
  intervals.push_back({poles.front() - W, poles.front() - 1e-9});
  for (size_t i = 0; i + 1 < poles.size(); ++i)
    intervals.push_back({poles[i] + 1e-9, poles[i + 1] - 1e-9});
  intervals.push_back({poles.back() + 1e-9, poles.back() + W});

  std::vector<double> edges{e.total_translate()};
  for (auto [lo, hi] : intervals) {
    if (!(hi > lo)) continue;
    auto ws = clustered_grid(lo, hi, 4001);
    double prev_w = ws.front(), prev_v = kp(prev_w);
    for (size_t i = 1; i < ws.size(); ++i) {
      double cur_w = ws[i], cur_v = kp(cur_w);
      if (std::isfinite(prev_v) && std::isfinite(cur_v) && prev_v * cur_v < 0.0) {
        double a = prev_w, b = cur_w, fa = prev_v;
        for (int it = 0; it < 100; ++it) {
          double mid = 0.5 * (a + b), fm = kp(mid);
          if (fa * fm <= 0.0)
            b = mid;
          else
            a = mid, fa = fm;
        }
        double value = kv(0.5 * (a + b));
        if (std::isfinite(value)) edges.push_back(value);
      }
      prev_w = cur_w;
      prev_v = cur_v;
    }
  }
  std::sort(edges.begin(), edges.end());
  // dedupe within a relative tolerance
  std::vector<double> out;
  for (double v : edges) {
    if (out.empty() || std::abs(v - out.back()) > 1e-11 * (1.0 + std::abs(v))) out.push_back(v);
  }
  return out;
}

}  // namespace

double continuous_density(const RExpr& e, double x, const std::vector<Atom>& atoms,
                          const InversionConfig& cfg, double neg_tol) {
  double s = cfg.ladder_scale(x);
  double d = density_ladder(e, x, atoms, cfg, s);
  if (d < -neg_tol)
    throw NegativeDensityError("extrapolated density is negative at x = " + fmt_double(x), x, d);
  return std::max(d, 0.0);
}

SpectralMeasure build_measure(const RExpr& e_in, const InversionConfig& icfg,
                              const BuildConfig& bcfg) {
  RExpr e = e_in.normalized();
  icfg.validate();

  // atoms first: the translate offset is the only location our expression
  // family can carry mass at, plus whatever the caller suggests
  std::vector<double> candidates = bcfg.atom_candidates;
  candidates.push_back(e.total_translate());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<Atom> atoms;
  for (double x0 : candidates) {
    double m = extract_atom(e, x0, icfg);
    if (m > 0.0) atoms.push_back({x0, m});
  }
  std::vector<double> atom_locs;
  for (const auto& a : atoms) atom_locs.push_back(a.x);

  // candidate support edges from the critical values of K
  std::vector<double> edges = candidate_edges(e);

  auto probe = [&](double x) {
    double s = 1.0;
    if (bcfg.edge_aware_ladder) {
      double d = std::min(dist_to(atom_locs, x), dist_to(edges, x));
      s = std::min(icfg.edge_frac * d / icfg.ladder.front(), 1.0);
    }
    return density_ladder(e, x, atoms, icfg, s);
  };

  // classify the gaps between candidate edges (plus the outer tails)
  const int n_gaps = static_cast<int>(edges.size()) + 1;
  std::vector<bool> is_support(n_gaps, false);
  for (int g = 0; g < n_gaps; ++g) {
    double lo = g == 0 ? edges.front() - 1.0 : edges[g - 1];
    double hi = g == n_gaps - 1 ? edges.back() + 1.0 : edges[g];
    if (!(hi - lo > 1e-11)) continue;
    bool support = false;
    for (double t : {0.5, 0.25, 0.75}) {
      double x = lo + t * (hi - lo);
      if (dist_to(atom_locs, x) < 1e-9) continue;
      if (probe(x) > bcfg.edge_threshold) {
        support = true;
        break;
      }
    }
    // outer gaps are unbounded in reality; density there must vanish
    if (g == 0 || g == n_gaps - 1) support = false;
    is_support[g] = support;
  }

  // merge consecutive support gaps into components [edges[i], edges[j]]
  std::vector<std::pair<double, double>> components;
  int g = 1;
  while (g < n_gaps) {
    if (g < n_gaps && is_support[g]) {
      int h = g;
      while (h + 1 < n_gaps && is_support[h + 1]) ++h;
      components.push_back({edges[g - 1], edges[h]});
      g = h + 1;
    } else {
      ++g;
    }
  }

  SpectralMeasure m;
  m.atoms = atoms;
  m.mass_tol = bcfg.mass_tol;

  if (components.empty()) {
    if (atoms.empty()) throw MassError("build_measure: no density and no atoms found", 0.0);
    m.support_lo = atoms.front().x;
    m.support_hi = atoms.back().x;
    m.validate();
    return m;
  }

  m.support_lo = components.front().first;
  m.support_hi = components.back().second;

  InversionConfig grid_cfg = icfg;
  if (bcfg.edge_aware_ladder) {
    grid_cfg.edge_refs = atom_locs;
    for (const auto& [lo, hi] : components) {
      grid_cfg.edge_refs.push_back(lo);
      grid_cfg.edge_refs.push_back(hi);
    }
  }

  // grid points distributed over the components by length share
  double total_len = 0.0;
  for (const auto& [lo, hi] : components) total_len += hi - lo;
  // Within a few floored-ladder widths of an edge the extrapolation has no
  // valid regime, so values there are clamped rather than gated; the nodes
  // carry ~1e-15 of the support and cannot move the mass.
  const double edge_slack =
      8.0 * icfg.ladder.front() * (icfg.ladder_floor / icfg.ladder.back()) / icfg.edge_frac;
  for (const auto& [lo, hi] : components) {
    int n = std::max(601, static_cast<int>(std::lround(bcfg.grid_points * (hi - lo) / total_len)));
    for (double x : clustered_grid(lo, hi, n)) {
      double d_edge = std::min(std::abs(x - lo), std::abs(x - hi));
      if (d_edge <= edge_slack) {
        double s = grid_cfg.ladder_scale(x);
        m.grid.push_back({x, std::max(0.0, density_ladder(e, x, atoms, grid_cfg, s))});
      } else {
        m.grid.push_back({x, continuous_density(e, x, atoms, grid_cfg, bcfg.edge_threshold)});
      }
    }
  }

  m.validate();
  return m;
}

}  // namespace freeconv
