#include "roughweyl/mesh.hpp"

#include "roughweyl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace roughweyl {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double cross(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return 0.5 * cross(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += signed_area(t);
  return sum;
}

Point Mesh::centroid(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

std::vector<int> Mesh::tags() const {
  std::set<int> s;
  for (const auto& e : boundary_edges) s.insert(e.tag);
  return {s.begin(), s.end()};
}

Mesh generate_unit_square(int n, DiagonalPattern pattern) {
  if (n < 1) throw MeshError("generate_unit_square: n must be >= 1");
  if (pattern == DiagonalPattern::Mirrored && n % 2 != 0)
    throw MeshError("generate_unit_square: mirrored pattern needs an even n");

  Mesh m;
  const int side = n + 1;
  m.vertices.reserve(static_cast<std::size_t>(side * side));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto id = [side](int i, int j) { return j * side + i; };
  m.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool flip = pattern == DiagonalPattern::Mirrored && 2 * i >= n;
      if (flip) {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      } else {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      }
    }
  }

  for (int i = 0; i < n; ++i) m.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, 0});
  for (int j = 0; j < n; ++j) m.boundary_edges.push_back({{id(n, j), id(n, j + 1)}, 1});
  for (int i = n; i > 0; --i) m.boundary_edges.push_back({{id(i, n), id(i - 1, n)}, 2});
  for (int j = n; j > 0; --j) m.boundary_edges.push_back({{id(0, j), id(0, j - 1)}, 3});
  return m;
}

Mesh generate_disk(int rings) {
  if (rings < 1) throw MeshError("generate_disk: rings must be >= 1");

  Mesh m;
  m.vertices.emplace_back(0.0, 0.0);
  auto ring_start = [](int i) { return i == 0 ? 0 : 1 + 3 * i * (i - 1); };
  auto ring_count = [](int i) { return i == 0 ? 1 : 6 * i; };

  for (int i = 1; i <= rings; ++i) {
    const double r = static_cast<double>(i) / rings;
    const int cnt = ring_count(i);
    for (int j = 0; j < cnt; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / cnt;
      m.vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }

  for (int i = 1; i <= rings; ++i) {
    const int s_out = ring_start(i), n_out = ring_count(i);
    if (i == 1) {
      for (int j = 0; j < n_out; ++j) m.triangles.push_back({0, s_out + j, s_out + (j + 1) % n_out});
      continue;
    }
    const int s_in = ring_start(i - 1), n_in = ring_count(i - 1);
    // Merge the two rings by angle; integer comparison keeps ties exact.
    int pa = 0, pb = 0;
    while (pa < n_in || pb < n_out) {
      const int ia = s_in + pa % n_in, ib = s_out + pb % n_out;
      const bool advance_outer =
          pa == n_in || (pb < n_out && static_cast<long>(pb + 1) * n_in <= static_cast<long>(pa + 1) * n_out);
      if (advance_outer) {
        m.triangles.push_back({ia, ib, s_out + (pb + 1) % n_out});
        ++pb;
      } else {
        m.triangles.push_back({ia, ib, s_in + (pa + 1) % n_in});
        ++pa;
      }
    }
  }

  const int s = ring_start(rings), cnt = ring_count(rings);
  for (int j = 0; j < cnt; ++j) m.boundary_edges.push_back({{s + j, s + (j + 1) % cnt}, 0});
  return m;
}

Mesh refine_uniform(const Mesh& m) {
  Mesh out;
  out.vertices = m.vertices;
  out.level = m.level + 1;
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(m.triangles.size() * 2);

  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  out.triangles.reserve(m.triangles.size() * 4);
  for (const auto& [a, b, c] : m.triangles) {
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }

  out.boundary_edges.reserve(m.boundary_edges.size() * 2);
  for (const auto& e : m.boundary_edges) {
    const int mm = mid(e.v[0], e.v[1]);
    out.boundary_edges.push_back({{e.v[0], mm}, e.tag});
    out.boundary_edges.push_back({{mm, e.v[1]}, e.tag});
  }
  return out;
}

Mesh refine_uniform(const Mesh& m, int times) {
  Mesh out = m;
  for (int i = 0; i < times; ++i) out = refine_uniform(out);
  return out;
}

std::vector<std::string> validate(const Mesh& m) {
  std::vector<std::string> report;
  const int nv = m.num_vertices();

  for (int i = 0; i < nv; ++i) {
    if (!std::isfinite(m.vertices[i].x()) || !std::isfinite(m.vertices[i].y()))
      report.push_back("non-finite coordinate at vertex " + std::to_string(i));
  }

  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  std::map<std::uint64_t, int> incidence;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    bool in_range = true;
    for (int v : tri) {
      if (v < 0 || v >= nv) in_range = false;
    }
    if (!in_range) {
      report.push_back("vertex index out of range in triangle " + std::to_string(t));
      continue;
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      report.push_back("repeated vertex in triangle " + std::to_string(t));
      continue;
    }
    for (int v : tri) used[v] = 1;
    const double area = m.signed_area(t);
    if (area < 0.0) report.push_back("negative area at index " + std::to_string(t));
    else if (area == 0.0) report.push_back("zero area at index " + std::to_string(t));
    for (int k = 0; k < 3; ++k) ++incidence[edge_key(tri[k], tri[(k + 1) % 3])];
  }

  for (int i = 0; i < nv; ++i) {
    if (!used[i]) report.push_back("vertex " + std::to_string(i) + " is not referenced by any triangle");
  }

  auto edge_name = [](std::uint64_t key) {
    return "(" + std::to_string(key >> 32) + "," + std::to_string(key & 0xffffffffu) + ")";
  };

  std::map<std::uint64_t, int> tagged;
  for (const auto& e : m.boundary_edges) {
    if (e.v[0] < 0 || e.v[0] >= nv || e.v[1] < 0 || e.v[1] >= nv) {
      report.push_back("boundary edge vertex index out of range");
      continue;
    }
    const auto key = edge_key(e.v[0], e.v[1]);
    if (tagged.contains(key)) report.push_back("boundary edge " + edge_name(key) + " listed twice");
    tagged[key] = e.tag;
    const auto it = incidence.find(key);
    const int count = it == incidence.end() ? 0 : it->second;
    if (count != 1)
      report.push_back("boundary edge " + edge_name(key) + " belongs to " + std::to_string(count) +
                       " triangles");
  }

  for (const auto& [key, count] : incidence) {
    if (count > 2) {
      report.push_back("nonconforming edge " + edge_name(key) + ": shared by " + std::to_string(count) +
                       " triangles");
    } else if (count == 1 && !tagged.contains(key)) {
      report.push_back("nonconforming edge " + edge_name(key) + ": single incidence but not a tagged boundary edge");
    }
  }
  return report;
}

std::size_t count_edges(const Mesh& m) {
  std::set<std::uint64_t> edges;
  for (const auto& tri : m.triangles)
    for (int k = 0; k < 3; ++k) edges.insert(edge_key(tri[k], tri[(k + 1) % 3]));
  return edges.size();
}

Mesh map_vertices(const Mesh& m, const std::function<Point(const Point&)>& phi) {
  Mesh out = m;
  for (auto& v : out.vertices) v = phi(v);
  return out;
}

Mesh permute_triangles(const Mesh& m, const std::vector<int>& perm) {
  if (perm.size() != m.triangles.size()) throw MeshError("permute_triangles: permutation size mismatch");
  Mesh out = m;
  for (std::size_t i = 0; i < perm.size(); ++i) out.triangles[i] = m.triangles.at(static_cast<std::size_t>(perm[i]));
  return out;
}

void write_mesh(const Mesh& m, std::ostream& os) {
  os << "RWMESH 1\n";
  os << "VERTICES " << m.vertices.size() << '\n';
  for (const auto& v : m.vertices) os << format_double(v.x()) << ' ' << format_double(v.y()) << '\n';
  os << "TRIANGLES " << m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "BOUNDARY " << m.boundary_edges.size() << '\n';
  for (const auto& e : m.boundary_edges) os << e.v[0] << ' ' << e.v[1] << ' ' << e.tag << '\n';
}

namespace {

class LineReader {
public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-empty, non-comment line split into whitespace tokens.
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      return tokens;
    }
    fail("unexpected end of file");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("mesh file line " + std::to_string(lineno_) + ": " + what);
  }

  template <class T>
  T parse(const std::string& tok) const {
    T value{};
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) fail("cannot parse '" + tok + "'");
    return value;
  }

  std::size_t section(const std::string& name) {
    auto tok = next();
    if (tok.size() != 2 || tok[0] != name) fail("expected section header '" + name + " <count>'");
    return parse<std::size_t>(tok[1]);
  }

private:
  std::istream& is_;
  int lineno_ = 0;
};

} // namespace

Mesh read_mesh(std::istream& is) {
  LineReader in(is);
  auto header = in.next();
  if (header.size() != 2 || header[0] != "RWMESH" || header[1] != "1") in.fail("expected header 'RWMESH 1'");

  Mesh m;
  const auto nv = in.section("VERTICES");
  m.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto tok = in.next();
    if (tok.size() != 2) in.fail("vertex line needs 2 coordinates");
    const double x = in.parse<double>(tok[0]), y = in.parse<double>(tok[1]);
    if (!std::isfinite(x) || !std::isfinite(y)) in.fail("non-finite coordinate");
    m.vertices.emplace_back(x, y);
  }

  auto check_index = [&](int v) {
    if (v < 0 || static_cast<std::size_t>(v) >= nv) in.fail("vertex index " + std::to_string(v) + " out of range");
    return v;
  };

  const auto nt = in.section("TRIANGLES");
  m.triangles.reserve(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    auto tok = in.next();
    if (tok.size() != 3) in.fail("triangle line needs 3 indices");
    m.triangles.push_back({check_index(in.parse<int>(tok[0])), check_index(in.parse<int>(tok[1])),
                           check_index(in.parse<int>(tok[2]))});
  }

  const auto nb = in.section("BOUNDARY");
  m.boundary_edges.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    auto tok = in.next();
    if (tok.size() != 3) in.fail("boundary line needs 'i j tag'");
    m.boundary_edges.push_back(
        {{check_index(in.parse<int>(tok[0])), check_index(in.parse<int>(tok[1]))}, in.parse<int>(tok[2])});
  }
  return m;
}

void save_mesh(const Mesh& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw MeshError("cannot open '" + path.string() + "' for writing");
  write_mesh(m, os);
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw MeshError("cannot open '" + path.string() + "'");
  return read_mesh(is);
}

} // namespace roughweyl
