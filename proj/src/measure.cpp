#include "freeconv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace freeconv {

double SpectralMeasure::continuous_mass() const {
  double s = 0.0;
  for (size_t i = 1; i < grid.size(); ++i)
    s += 0.5 * (grid[i].x - grid[i - 1].x) * (grid[i].density + grid[i - 1].density);
  return s;
}

double SpectralMeasure::total_mass() const {
  double s = continuous_mass();
  for (const auto& a : atoms) s += a.mass;
  return s;
}

double SpectralMeasure::moment(int k) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * std::pow(a.x, k);
  for (size_t i = 1; i < grid.size(); ++i) {
    double fl = std::pow(grid[i - 1].x, k) * grid[i - 1].density;
    double fr = std::pow(grid[i].x, k) * grid[i].density;
    s += 0.5 * (grid[i].x - grid[i - 1].x) * (fl + fr);
  }
  return s;
}

double SpectralMeasure::cdf(double x) const {
  double s = 0.0;
  // atom jumps sit at x - 1e-9 so that eigenvalues that are numerically zero
  // (either sign) land on the correct side
  for (const auto& a : atoms)
    if (a.x - 1e-9 <= x) s += a.mass;
  if (!grid.empty() && x > grid.front().x) {
    for (size_t i = 1; i < grid.size(); ++i) {
      double xl = grid[i - 1].x, xr = grid[i].x;
      if (x >= xr) {
        s += 0.5 * (xr - xl) * (grid[i].density + grid[i - 1].density);
      } else {
        double t = (x - xl) / (xr - xl);
        double dx_mid = grid[i - 1].density + t * (grid[i].density - grid[i - 1].density);
        s += 0.5 * (x - xl) * (grid[i - 1].density + dx_mid);
        break;
      }
    }
  }
  return s;
}

void SpectralMeasure::validate() const {
  for (const auto& g : grid)
    if (g.density < 0)
      throw NegativeDensityError("measure grid density negative at x = " + fmt_double(g.x),
                                 g.x, g.density);
  for (const auto& a : atoms)
    if (!(a.mass > 0 && a.mass <= 1.0))
      throw MassError("atom mass outside (0,1] at x = " + fmt_double(a.x), a.mass);
  double m = total_mass();
  if (std::abs(m - 1.0) > mass_tol)
    throw MassError("total mass " + fmt_double(m) + " outside 1 +/- " + fmt_double(mass_tol),
                    m);
}

std::string SpectralMeasure::to_csv() const {
  std::string out = "x,density\n";
  for (const auto& g : grid) out += fmt_double(g.x) + "," + fmt_double(g.density) + "\n";
  return out;
}

std::string SpectralMeasure::to_json_sidecar() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms) j["atoms"].push_back({{"x", a.x}, {"mass", a.mass}});
  j["support"] = {support_lo, support_hi};
  j["mass_tol"] = mass_tol;
  return j.dump(2) + "\n";
}

void SpectralMeasure::write(const std::string& csv_path) const {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw NumericError("cannot open " + csv_path + " for writing");
  csv << to_csv();
  std::ofstream side(csv_path + ".json", std::ios::binary);
  side << to_json_sidecar();
}

SpectralMeasure SpectralMeasure::read(const std::string& csv_path) {
  SpectralMeasure m;
  std::ifstream csv(csv_path);
  if (!csv) throw NumericError("cannot open " + csv_path);
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    m.grid.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  std::ifstream side(csv_path + ".json");
  if (side) {
    nlohmann::json j = nlohmann::json::parse(side);
    for (const auto& a : j["atoms"]) m.atoms.push_back({a["x"], a["mass"]});
    m.support_lo = j["support"][0];
    m.support_hi = j["support"][1];
    m.mass_tol = j["mass_tol"];
  }
  return m;
}

std::vector<double> measure_moments(const SpectralMeasure& m, int n_max) {
  if (n_max > 12) throw InvalidConfigError("measure_moments: n_max must be <= 12");
  std::vector<double> out;
  out.reserve(n_max);
  for (int k = 1; k <= n_max; ++k) out.push_back(m.moment(k));
  return out;
}

std::vector<double> clustered_grid(double a, double b, int n) {
  if (n < 2 || !(b > a)) throw InvalidConfigError("clustered_grid: need n >= 2 and b > a");
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) {
    double t = (j + 0.5) / n;
    double s = t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
    xs[j] = a + (b - a) * s;
  }
  return xs;
}

}  // namespace freeconv
