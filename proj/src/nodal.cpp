#include "toral/nodal.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "toral/errors.hpp"
#include "toral/parallel.hpp"
#include "toral/serialize.hpp"

namespace toral {

NodalGrid evaluate_grid(const Eigenfunction& phi, int n, NodalPart part) {
  if (phi.d() != 2) throw ValidationError("nodal grids need d = 2");
  if (n < 2) throw ValidationError("nodal grid needs at least 2 cells per side");
  NodalGrid g;
  g.n = n;
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  g.values.assign(side * side, 0.0);
  parallel_for(side, [&](std::size_t j) {
    for (std::size_t i = 0; i < side; ++i) {
      const cplx v = phi.evaluate({static_cast<double>(i) / n, static_cast<double>(j) / n});
      g.values[j * side + i] = part == NodalPart::Real ? v.real() : v.imag();
    }
  });
  const double h = g.cell();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double gx = (g.at(i + 1, j) - g.at(i, j)) / h;
      const double gy = (g.at(i, j + 1) - g.at(i, j)) / h;
      g.max_gradient = std::max(g.max_gradient, std::hypot(gx, gy));
    }
  return g;
}

std::size_t NodalContours::vertex_count() const {
  std::size_t c = 0;
  for (const auto& p : polylines) c += p.size();
  return c;
}

std::string NodalContours::csv() const {
  std::ostringstream os;
  os << "polyline,vertex,x,y\n";
  for (std::size_t k = 0; k < polylines.size(); ++k)
    for (std::size_t v = 0; v < polylines[k].size(); ++v)
      os << k << ',' << v << ',' << format_double(polylines[k][v][0]) << ',' << format_double(polylines[k][v][1])
         << '\n';
  return os.str();
}

std::string NodalContours::svg(int pixels) const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
     << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
  os << "<rect width=\"" << pixels << "\" height=\"" << pixels << "\" fill=\"white\" stroke=\"black\"/>\n";
  char buf[64];
  for (const auto& line : polylines) {
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (std::size_t v = 0; v < line.size(); ++v) {
      std::snprintf(buf, sizeof buf, "%c%.3f %.3f", v ? 'L' : 'M', line[v][0] * pixels, (1.0 - line[v][1]) * pixels);
      os << (v ? " " : "") << buf;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

NodalContours marching_squares(const NodalGrid& g) {
  const int n = g.n;
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  const double h = g.cell();
  auto hid = [&](int i, int j) { return 2 * (static_cast<std::size_t>(j) * side + i); };
  auto vid = [&](int i, int j) { return 2 * (static_cast<std::size_t>(j) * side + i) + 1; };

  std::unordered_map<std::size_t, RealVec> point;
  auto crossing = [&](std::size_t id, int i, int j, bool vertical) {
    auto it = point.find(id);
    if (it != point.end()) return;
    const double va = g.at(i, j);
    const double vb = vertical ? g.at(i, j + 1) : g.at(i + 1, j);
    const double s = va / (va - vb);
    point.emplace(id, vertical ? RealVec{i * h, (j + s) * h} : RealVec{(i + s) * h, j * h});
  };

  std::vector<std::array<std::size_t, 2>> segs;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double c[4] = {g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1), g.at(i, j + 1)};
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (c[k] > 0) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;
      const std::size_t bottom = hid(i, j), right = vid(i + 1, j), top = hid(i, j + 1), left = vid(i, j);
      const bool pos[4] = {c[0] > 0, c[1] > 0, c[2] > 0, c[3] > 0};
      if (pos[0] != pos[1]) crossing(bottom, i, j, false);
      if (pos[1] != pos[2]) crossing(right, i + 1, j, true);
      if (pos[3] != pos[2]) crossing(top, i, j + 1, false);
      if (pos[0] != pos[3]) crossing(left, i, j, true);
      if (mask == 5 || mask == 10) {
        const bool center = (c[0] + c[1] + c[2] + c[3]) > 0;
        // isolate the corners whose sign differs from the center
        const bool cut13 = (mask == 5) == center;
        if (cut13) {
          segs.push_back({bottom, right});
          segs.push_back({top, left});
        } else {
          segs.push_back({left, bottom});
          segs.push_back({right, top});
        }
        continue;
      }
      std::array<std::size_t, 2> e{};
      int m = 0;
      if (pos[0] != pos[1]) e[m++] = bottom;
      if (pos[1] != pos[2]) e[m++] = right;
      if (pos[3] != pos[2]) e[m++] = top;
      if (pos[0] != pos[3]) e[m++] = left;
      segs.push_back(e);
    }
  }

  std::unordered_map<std::size_t, std::array<std::size_t, 2>> adj;
  std::unordered_map<std::size_t, int> degree;
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (auto e : segs[s]) adj[e][degree[e]++] = s;

  NodalContours out;
  std::vector<char> used(segs.size(), 0);
  auto walk = [&](std::size_t s, std::size_t entry) {
    std::vector<RealVec> line{point.at(entry)};
    std::size_t cur = s, in = entry;
    while (true) {
      used[cur] = 1;
      const std::size_t exit = segs[cur][0] == in ? segs[cur][1] : segs[cur][0];
      line.push_back(point.at(exit));
      if (degree[exit] < 2) break;
      const auto& a = adj[exit];
      const std::size_t next = a[0] == cur ? a[1] : a[0];
      if (used[next]) break;  // loop closed
      cur = next;
      in = exit;
    }
    out.polylines.push_back(std::move(line));
  };
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    for (auto e : segs[s])
      if (degree[e] == 1) {
        walk(s, e);
        break;
      }
  }
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) walk(s, segs[s][0]);
  out.grid = g;
  return out;
}

NodalContours nodal_contours(const Eigenfunction& phi, int n, NodalPart part) {
  return marching_squares(evaluate_grid(phi, n, part));
}

}  // namespace toral
