#include "accelfem/richardson.hpp"

#include "accelfem/keyvalue.hpp"

#include <algorithm>
#include <cstdio>

namespace afem {

GridFunction combine(const std::vector<GridFunction>& levels, const Eigen::VectorXd& c) {
  if (levels.empty() || static_cast<Index>(levels.size()) != c.size())
    throw InputError("combine needs one coefficient per level");
  const TorusLattice& coarse = levels.front().lattice;
  GridFunction out(coarse);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (coarse.levels_to(levels[j].lattice) != static_cast<int>(j))
      throw InputError("level " + std::to_string(j) + " is not the " + std::to_string(j) + "-fold refinement");
    out.values += c[static_cast<Index>(j)] * restrict_to(levels[j], coarse).values;
  }
  return out;
}

double error_norm(const GridFunction& u, const GridFunction& reference) {
  const GridFunction r = u.lattice == reference.lattice ? reference : restrict_to(reference, u.lattice);
  return norm_0h(GridFunction(u.lattice, u.values - r.values));
}

double estimate_order(const std::vector<std::pair<double, double>>& h_error) {
  std::vector<double> hs;
  for (const auto& [h, e] : h_error) {
    if (!(h > 0.0)) throw InputError("mesh sizes must be positive");
    if (!(e > 0.0)) throw NumericalError("error is zero or negative; cannot fit an order");
    if (std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(h);
  }
  if (hs.size() < 3) throw InputError("order fit needs at least 3 distinct mesh sizes");
  const double m = static_cast<double>(h_error.size());
  double sx = 0, sy = 0;
  for (const auto& [h, e] : h_error) {
    sx += std::log(h);
    sy += std::log(e);
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (const auto& [h, e] : h_error) {
    const double dx = std::log(h) - mx;
    sxy += dx * (std::log(e) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void ConvergenceReport::add(double h, int n, double error) {
  ConvergenceRow row{h, n, error};
  if (!rows.empty() && rows.back().error > 0.0 && error > 0.0)
    row.order_local = std::log(rows.back().error / error) / std::log(rows.back().h / h);
  rows.push_back(row);
}

void ConvergenceReport::fit() {
  if (rows.size() < 3) return;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r.h, r.error);
  fitted_order = estimate_order(pts);
}

std::string ConvergenceReport::to_csv() const {
  std::string out = "h,n,error,order_local\n";
  for (const auto& r : rows) {
    out += format_real(r.h) + "," + std::to_string(r.n) + "," + format_real(r.error) + ",";
    if (std::isfinite(r.order_local)) out += format_real(r.order_local);
    out += "\n";
  }
  out += "fitted_order,,,";
  if (std::isfinite(fitted_order)) out += format_real(fitted_order);
  out += "\n";
  return out;
}

std::string convergence_svg(const std::vector<ConvergenceReport>& reports) {
  double hmin = 1e300, hmax = -1e300, emin = 1e300, emax = -1e300;
  for (const auto& rep : reports)
    for (const auto& r : rep.rows) {
      if (!(r.error > 0.0)) continue;
      hmin = std::min(hmin, std::log10(r.h));
      hmax = std::max(hmax, std::log10(r.h));
      emin = std::min(emin, std::log10(r.error));
      emax = std::max(emax, std::log10(r.error));
    }
  if (hmin >= hmax) hmax = hmin + 1;
  if (emin >= emax) emax = emin + 1;
  const double W = 640, H = 480, pad = 60;
  auto px = [&](double lh) { return pad + (lh - hmin) / (hmax - hmin) * (W - 2 * pad); };
  auto py = [&](double le) { return H - pad - (le - emin) / (emax - emin) * (H - 2 * pad); };
  const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  char buf[256];
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", pad, pad,
                W - 2 * pad, H - 2 * pad);
  out += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\">log10 h</text>\n", W / 2, H - 20);
  out += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"10\" y=\"%g\" font-size=\"12\">log10 error</text>\n", pad - 10);
  out += buf;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const char* col = colours[k % 4];
    std::string pts;
    for (const auto& r : reports[k].rows) {
      if (!(r.error > 0.0)) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(std::log10(r.h)), py(std::log10(r.error)));
      pts += buf;
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" points=\"" + pts + "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s (order %.3f)</text>\n",
                  pad + 10, pad + 20 + 16.0 * k, col, reports[k].label.c_str(), reports[k].fitted_order);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace afem
