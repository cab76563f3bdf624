#include "gradex/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gradex {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline drift
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

const char* role_name(const MeshNode& n) {
  switch (n.role) {
    case NodeRole::Interior:
      return "interior";
    case NodeRole::Boundary:
      return "boundary";
    case NodeRole::SlitSide:
      return n.side > 0 ? "slit_L" : "slit_R";
  }
  return "?";
}

}  // namespace

void export_scalar_field(const ScalarField& field, const std::filesystem::path& path) {
  const MeshGraph& g = field.graph();
  auto out = open_out(path);
  out << (g.dim() == 3 ? "node,x,y,z,value\n" : "node,x,y,value\n");
  for (int i = 0; i < g.size(); ++i) {
    const Vec& p = g.node(i).pos;
    out << i << ',' << format_number(p.x) << ',' << format_number(p.y);
    if (g.dim() == 3) out << ',' << format_number(p.z);
    out << ',' << format_number(field[i]) << '\n';
  }
}

void export_mask(const MeshGraph& g, const std::vector<char>& mask,
                 const std::filesystem::path& path) {
  auto out = open_out(path);
  out << (g.dim() == 3 ? "node,x,y,z,marked\n" : "node,x,y,marked\n");
  for (int i = 0; i < g.size(); ++i) {
    const Vec& p = g.node(i).pos;
    out << i << ',' << format_number(p.x) << ',' << format_number(p.y);
    if (g.dim() == 3) out << ',' << format_number(p.z);
    out << ',' << int(i < static_cast<int>(mask.size()) && mask[i] ? 1 : 0) << '\n';
  }
}

void export_path(const PathPolyline& path, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "s_euclid,s_finsler,x,y\n";
  for (size_t i = 0; i < path.points.size(); ++i)
    out << format_number(path.s_euclid[i]) << ',' << format_number(path.s_finsler[i]) << ','
        << format_number(path.points[i].x) << ',' << format_number(path.points[i].y) << '\n';
}

void export_graph_nodes(const MeshGraph& g, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << (g.dim() == 3 ? "node,x,y,z,role\n" : "node,x,y,role\n");
  for (int i = 0; i < g.size(); ++i) {
    const MeshNode& n = g.node(i);
    out << i << ',' << format_number(n.pos.x) << ',' << format_number(n.pos.y);
    if (g.dim() == 3) out << ',' << format_number(n.pos.z);
    out << ',' << role_name(n) << '\n';
  }
}

void export_graph_edges(const MeshGraph& g, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "u,v,w\n";
  for (int u = 0; u < g.size(); ++u)
    for (const MeshEdge& e : g.out_edges(u))
      out << u << ',' << e.to << ',' << format_number(e.w) << '\n';
}

ScalarField read_scalar_field(std::shared_ptr<const MeshGraph> graph,
                              const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty field CSV");
  const bool has_z = line.find(",z,") != std::string::npos;
  std::vector<double> vals(graph->size(), kInf);
  std::vector<char> seen(graph->size(), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    auto next = [&]() {
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("short CSV row");
      return tok;
    };
    int id = std::stoi(next());
    if (id < 0 || id >= graph->size()) throw std::runtime_error("node id out of range");
    Vec p;
    p.x = std::stod(next());
    p.y = std::stod(next());
    if (has_z) p.z = std::stod(next());
    if ((p - graph->node(id).pos).norm() > 1e-9)
      throw std::runtime_error("node position mismatch in field CSV");
    vals[id] = std::stod(next());
    seen[id] = 1;
  }
  for (int i = 0; i < graph->size(); ++i)
    if (!seen[i]) throw std::runtime_error("field CSV misses node " + std::to_string(i));
  return ScalarField(std::move(graph), std::move(vals));
}

}  // namespace gradex
