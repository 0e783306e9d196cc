#include "bstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bstokes {

const char* to_string(BcConfig bc) {
  switch (bc) {
    case BcConfig::VelDisp: return "vel_disp";
    case BcConfig::StressPressure: return "stress_pressure";
    case BcConfig::DirichletDagger: return "dirichlet_dagger";
  }
  return "?";
}

const char* to_string(FacetTag tag) {
  switch (tag) {
    case FacetTag::GammaFU: return "gamma_f_u";
    case FacetTag::GammaFSigma: return "gamma_f_sigma";
    case FacetTag::GammaPD: return "gamma_p_d";
    case FacetTag::GammaPP: return "gamma_p_p";
    case FacetTag::Sigma: return "sigma";
    case FacetTag::Interior: return "interior";
  }
  return "?";
}

double Mesh::cell_area(int c) const {
  const auto& t = cells[c];
  Eigen::Vector2d e1 = vertices[t[1]] - vertices[t[0]];
  Eigen::Vector2d e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::facet_length(int f) const {
  return (vertices[facets[f][1]] - vertices[facets[f][0]]).norm();
}

Eigen::Vector2d Mesh::cell_centroid(int c) const {
  const auto& t = cells[c];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Eigen::Vector2d Mesh::facet_midpoint(int f) const {
  return 0.5 * (vertices[facets[f][0]] + vertices[facets[f][1]]);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) a += cell_area(c);
  return a;
}

std::vector<int> Mesh::sigma_facets() const { return facets_with_tag(FacetTag::Sigma); }

std::vector<int> Mesh::facets_with_tag(FacetTag tag) const {
  std::vector<int> out;
  for (int f = 0; f < num_facets(); ++f)
    if (facet_tag[f] == tag) out.push_back(f);
  return out;
}

int Mesh::count_cells(CellTag tag) const {
  int n = 0;
  for (auto t : cell_tag) n += (t == tag);
  return n;
}

bool Mesh::sigma_is_closed() const {
  std::map<int, int> degree;
  for (int f = 0; f < num_facets(); ++f) {
    if (facet_tag[f] != FacetTag::Sigma) continue;
    ++degree[facets[f][0]];
    ++degree[facets[f][1]];
  }
  if (degree.empty()) return false;
  for (auto [v, d] : degree)
    if (d != 2) return false;
  return true;
}

Eigen::Vector2d facet_normal_from_geometry(const Mesh& mesh, int f) {
  Eigen::Vector2d a = mesh.vertices[mesh.facets[f][0]];
  Eigen::Vector2d b = mesh.vertices[mesh.facets[f][1]];
  Eigen::Vector2d t = (b - a).normalized();
  Eigen::Vector2d n(t.y(), -t.x());
  // Orient away from the reference cell: the fluid cell for Sigma facets,
  // facet_cell[0] otherwise.
  int ref = mesh.facet_cell[f][0];
  if (mesh.facet_tag[f] == FacetTag::Sigma) {
    int c0 = mesh.facet_cell[f][0], c1 = mesh.facet_cell[f][1];
    ref = (mesh.cell_tag[c0] == CellTag::Fluid) ? c0 : c1;
  }
  Eigen::Vector2d mid = 0.5 * (a + b);
  if (n.dot(mid - mesh.cell_centroid(ref)) < 0.0) n = -n;
  return n;
}

Mesh build_from_arrays(std::vector<Eigen::Vector2d> vertices,
                       std::vector<std::array<int, 3>> cells,
                       std::vector<CellTag> cell_tags,
                       const std::function<FacetTag(const Eigen::Vector2d&)>& boundary_tagger,
                       BcConfig bc) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  mesh.cell_tag = std::move(cell_tags);
  mesh.bc_config = bc;

  // Enforce counter-clockwise orientation.
  for (auto& t : mesh.cells) {
    Eigen::Vector2d e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    Eigen::Vector2d e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    if (e1.x() * e2.y() - e1.y() * e2.x() < 0.0) std::swap(t[1], t[2]);
  }

  // Unique edge list with cell adjacency.
  std::map<std::array<int, 2>, int> edge_id;
  mesh.cell_facet.assign(mesh.cells.size(), {-1, -1, -1});
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.cells[c][(k + 1) % 3];
      int b = mesh.cells[c][(k + 2) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = edge_id.find(key);
      int f;
      if (it == edge_id.end()) {
        f = static_cast<int>(mesh.facets.size());
        edge_id.emplace(key, f);
        mesh.facets.push_back(key);
        mesh.facet_cell.push_back({c, -1});
      } else {
        f = it->second;
        if (mesh.facet_cell[f][1] != -1)
          throw std::runtime_error("build_from_arrays: facet shared by more than two cells");
        mesh.facet_cell[f][1] = c;
      }
      mesh.cell_facet[c][k] = f;
    }
  }

  mesh.facet_tag.assign(mesh.facets.size(), FacetTag::Interior);
  mesh.facet_normal.assign(mesh.facets.size(), Eigen::Vector2d::Zero());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    int c0 = mesh.facet_cell[f][0], c1 = mesh.facet_cell[f][1];
    if (c1 == -1) {
      mesh.facet_tag[f] = boundary_tagger(mesh.facet_midpoint(f));
    } else if (mesh.cell_tag[c0] != mesh.cell_tag[c1]) {
      mesh.facet_tag[f] = FacetTag::Sigma;
    }
    mesh.facet_normal[f] = facet_normal_from_geometry(mesh, f);
  }
  return mesh;
}

Mesh build_split_square(int n, BcConfig bc) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_split_square: n must be even and >= 2");

  std::vector<Eigen::Vector2d> verts((n + 1) * (n + 1));
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts[vid(i, j)] = Eigen::Vector2d(double(i) / n, double(j) / n);

  std::vector<std::array<int, 3>> cells;
  std::vector<CellTag> tags;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if ((i + j) % 2 == 0) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
      CellTag t = (i < n / 2) ? CellTag::Fluid : CellTag::Porous;
      tags.push_back(t);
      tags.push_back(t);
    }
  }

  auto tagger = [bc](const Eigen::Vector2d& m) {
    const double eps = 1e-12;
    bool fluid_side = m.x() < 0.5;
    if (m.x() < eps || m.x() > 1.0 - eps) {
      // Left and right outer edges.
      if (m.x() < eps)
        return bc == BcConfig::StressPressure ? FacetTag::GammaFU : FacetTag::GammaFSigma;
      return bc == BcConfig::StressPressure ? FacetTag::GammaPD : FacetTag::GammaPP;
    }
    // Top and bottom edges, split at the interface.
    if (bc == BcConfig::StressPressure)
      return fluid_side ? FacetTag::GammaFSigma : FacetTag::GammaPP;
    return fluid_side ? FacetTag::GammaFU : FacetTag::GammaPD;
  };
  return build_from_arrays(std::move(verts), std::move(cells), std::move(tags), tagger, bc);
}

Mesh build_enclosed_disk(int n) {
  if (n < 4) throw std::invalid_argument("build_enclosed_disk: n must be >= 4");

  const int m = 8 * ((n + 1) / 2);  // angular divisions, multiple of 8 so square corners are vertices
  const int kin = m / 8;            // radial layers inside the disk
  const int kout = m / 8;           // blend layers disk -> square
  const double radius = 0.25;
  const Eigen::Vector2d center(0.5, 0.5);

  auto circle_pt = [&](int i, double r) {
    double th = 2.0 * M_PI * i / m;
    return Eigen::Vector2d(center.x() + r * std::cos(th), center.y() + r * std::sin(th));
  };
  auto square_pt = [&](int i) {
    double th = 2.0 * M_PI * i / m;
    Eigen::Vector2d d(std::cos(th), std::sin(th));
    double s = std::max(std::abs(d.x()), std::abs(d.y()));
    return Eigen::Vector2d(center + 0.5 * d / s);
  };

  std::vector<Eigen::Vector2d> verts;
  verts.push_back(center);
  // Rings 1..kin inside the disk, rings kin+1..kin+kout blending to the square.
  auto ring_vid = [&](int ring, int i) { return 1 + (ring - 1) * m + (i % m); };
  for (int ring = 1; ring <= kin; ++ring) {
    double r = radius * ring / kin;
    for (int i = 0; i < m; ++i) verts.push_back(circle_pt(i, r));
  }
  for (int ring = 1; ring <= kout; ++ring) {
    double s = double(ring) / kout;
    for (int i = 0; i < m; ++i)
      verts.push_back((1.0 - s) * circle_pt(i, radius) + s * square_pt(i));
  }

  std::vector<std::array<int, 3>> cells;
  std::vector<CellTag> tags;
  for (int i = 0; i < m; ++i) {  // fan around the center
    cells.push_back({0, ring_vid(1, i), ring_vid(1, i + 1)});
    tags.push_back(CellTag::Porous);
  }
  for (int ring = 1; ring < kin + kout; ++ring) {
    CellTag t = ring < kin ? CellTag::Porous : CellTag::Fluid;
    for (int i = 0; i < m; ++i) {
      int a = ring_vid(ring, i), b = ring_vid(ring, i + 1);
      int c = ring_vid(ring + 1, i + 1), d = ring_vid(ring + 1, i);
      if ((i + ring) % 2 == 0) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
      tags.push_back(t);
      tags.push_back(t);
    }
  }

  auto tagger = [](const Eigen::Vector2d& mid) {
    const double eps = 1e-12;
    // Short traction arcs at the middle of the left and right square edges.
    bool left = mid.x() < eps, right = mid.x() > 1.0 - eps;
    if ((left || right) && std::abs(mid.y() - 0.5) < 0.15) return FacetTag::GammaFSigma;
    return FacetTag::GammaFU;
  };
  return build_from_arrays(std::move(verts), std::move(cells), std::move(tags), tagger,
                           BcConfig::VelDisp);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Eigen::Vector2d> verts = mesh.vertices;
  verts.resize(mesh.num_vertices() + mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f)
    verts[mesh.num_vertices() + f] = mesh.facet_midpoint(f);
  auto mid = [&](int f) { return mesh.num_vertices() + f; };

  std::vector<std::array<int, 3>> cells;
  std::vector<CellTag> tags;
  cells.reserve(4 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto [a, b, d] = mesh.cells[c];
    // cell_facet[c][k] is opposite vertex k
    int mbd = mid(mesh.cell_facet[c][0]);
    int mda = mid(mesh.cell_facet[c][1]);
    int mab = mid(mesh.cell_facet[c][2]);
    cells.push_back({a, mab, mda});
    cells.push_back({b, mbd, mab});
    cells.push_back({d, mda, mbd});
    cells.push_back({mab, mbd, mda});
    for (int k = 0; k < 4; ++k) tags.push_back(mesh.cell_tag[c]);
  }

  // Children of a tagged parent facet inherit its tag; new facets interior.
  std::map<std::array<int, 2>, FacetTag> inherited;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.facet_tag[f] == FacetTag::Interior) continue;
    int v0 = mesh.facets[f][0], v1 = mesh.facets[f][1], vm = mid(f);
    inherited[{std::min(v0, vm), std::max(v0, vm)}] = mesh.facet_tag[f];
    inherited[{std::min(v1, vm), std::max(v1, vm)}] = mesh.facet_tag[f];
  }
  auto tagger = [](const Eigen::Vector2d&) { return FacetTag::Interior; };
  Mesh fine =
      build_from_arrays(std::move(verts), std::move(cells), std::move(tags), tagger, mesh.bc_config);
  for (int f = 0; f < fine.num_facets(); ++f) {
    auto it = inherited.find(fine.facets[f]);
    if (it != inherited.end()) {
      fine.facet_tag[f] = it->second;
      fine.facet_normal[f] = facet_normal_from_geometry(fine, f);
    }
  }
  return fine;
}

void validate_mesh(const Mesh& mesh) {
  auto fail = [](const std::string& what) { throw std::runtime_error("invalid mesh: " + what); };

  std::set<std::pair<double, double>> unique;
  for (const auto& v : mesh.vertices)
    if (!unique.emplace(v.x(), v.y()).second) fail("duplicate vertex");

  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_area(c) <= 0.0) fail("non-positive cell orientation");

  for (int f = 0; f < mesh.num_facets(); ++f) {
    bool boundary = mesh.facet_cell[f][1] == -1;
    FacetTag tag = mesh.facet_tag[f];
    if (boundary) {
      if (tag == FacetTag::Sigma || tag == FacetTag::Interior)
        fail("boundary facet tagged Sigma/Interior");
    } else {
      int c0 = mesh.facet_cell[f][0], c1 = mesh.facet_cell[f][1];
      bool mixed = mesh.cell_tag[c0] != mesh.cell_tag[c1];
      if (mixed && tag != FacetTag::Sigma) fail("interface facet not tagged Sigma");
      if (!mixed && tag != FacetTag::Interior) fail("interior facet with boundary tag");
      if (tag == FacetTag::Sigma) {
        Eigen::Vector2d n = facet_normal_from_geometry(mesh, f);
        if ((n - mesh.facet_normal[f]).norm() > 1e-12) fail("stale interface normal");
      }
    }
  }

  // Sigma facets must form a connected polyline (open or closed).
  std::map<int, std::vector<int>> adj;
  std::vector<int> sig = mesh.sigma_facets();
  for (int f : sig) {
    adj[mesh.facets[f][0]].push_back(f);
    adj[mesh.facets[f][1]].push_back(f);
  }
  if (!sig.empty()) {
    int odd = 0;
    for (auto& [v, fs] : adj) {
      if (fs.size() > 2) fail("branching interface");
      odd += (fs.size() == 1);
    }
    if (odd != 0 && odd != 2) fail("disconnected interface endpoints");
    // walk from one facet and count reachable
    std::set<int> seen{sig[0]};
    std::vector<int> stack{sig[0]};
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (int v : mesh.facets[f])
        for (int g : adj[v])
          if (seen.insert(g).second) stack.push_back(g);
    }
    if (seen.size() != sig.size()) fail("interface not connected");
  }
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << mesh.num_facets() << '\n';
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c)
    out << mesh.cells[c][0] << ' ' << mesh.cells[c][1] << ' ' << mesh.cells[c][2] << ' '
        << static_cast<int>(mesh.cell_tag[c]) << '\n';
  for (int f = 0; f < mesh.num_facets(); ++f)
    out << mesh.facets[f][0] << ' ' << mesh.facets[f][1] << ' '
        << static_cast<int>(mesh.facet_tag[f]) << '\n';
}

Mesh read_mesh(const std::string& path, BcConfig bc) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  int nv, nc, nf;
  if (!(in >> nv >> nc >> nf)) throw std::runtime_error("read_mesh: bad header");
  std::vector<Eigen::Vector2d> verts(nv);
  for (auto& v : verts) in >> v.x() >> v.y();
  std::vector<std::array<int, 3>> cells(nc);
  std::vector<CellTag> tags(nc);
  for (int c = 0; c < nc; ++c) {
    int t;
    in >> cells[c][0] >> cells[c][1] >> cells[c][2] >> t;
    tags[c] = static_cast<CellTag>(t);
  }
  std::map<std::array<int, 2>, FacetTag> ftags;
  for (int f = 0; f < nf; ++f) {
    int a, b, t;
    in >> a >> b >> t;
    ftags[{std::min(a, b), std::max(a, b)}] = static_cast<FacetTag>(t);
  }
  if (!in) throw std::runtime_error("read_mesh: truncated file");
  auto tagger = [&ftags](const Eigen::Vector2d&) { return FacetTag::Interior; };
  Mesh mesh = build_from_arrays(std::move(verts), std::move(cells), std::move(tags), tagger, bc);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    auto it = ftags.find(mesh.facets[f]);
    if (it == ftags.end()) throw std::runtime_error("read_mesh: facet missing from file");
    if (mesh.facet_cell[f][1] == -1 || it->second == FacetTag::Sigma) {
      mesh.facet_tag[f] = it->second;
      mesh.facet_normal[f] = facet_normal_from_geometry(mesh, f);
    }
  }
  return mesh;
}

}  // namespace bstokes
