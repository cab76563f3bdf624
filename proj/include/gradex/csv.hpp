#pragma once

#include <filesystem>
#include <string>

#include "gradex/geodesic.hpp"

namespace gradex {

// fixed 12-significant-digit decimal formatting (locale-independent,
// byte-stable across platforms)
std::string format_number(double v);

void export_scalar_field(const ScalarField& field, const std::filesystem::path& path);
void export_mask(const MeshGraph& graph, const std::vector<char>& mask,
                 const std::filesystem::path& path);
void export_path(const PathPolyline& path, const std::filesystem::path& file);
void export_graph_nodes(const MeshGraph& graph, const std::filesystem::path& path);
void export_graph_edges(const MeshGraph& graph, const std::filesystem::path& path);

// candidate-solution ingestion: CSV with header node,x,y[,z],value; node ids
// and positions must match the graph
ScalarField read_scalar_field(std::shared_ptr<const MeshGraph> graph,
                              const std::filesystem::path& path);

}  // namespace gradex
